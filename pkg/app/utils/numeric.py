"""
Numeric helpers shared by the solvers and the verifier.
Double precision uses numpy, working precision uses mpmath.
"""

import logging
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import numpy as np
from mpmath import mp

logger = logging.getLogger(__name__)


def to_mp(value):
    """Convert an exact or double value to an mpmath number at the current precision."""
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return mp.mpc(value.real, value.imag)
    if isinstance(value, int):
        return mp.mpf(value)
    if isinstance(value, float):
        return mp.mpf(value)
    return value


def parse_scalar(text: str):
    """Exact rational for 'p' or 'p/q', otherwise a Python complex literal such as '0.5+2j'.

    Raises:
        ValueError: If the text is neither.
    """
    cleaned = str(text).replace(" ", "")
    try:
        return Fraction(cleaned)
    except ValueError:
        pass
    try:
        return complex(cleaned)
    except ValueError:
        raise ValueError(f"Not a rational or complex number: {text!r}") from None


def to_complex(value) -> complex:
    if isinstance(value, Fraction):
        return complex(float(value))
    return complex(value)


def poly_arrays(poly) -> Tuple[np.ndarray, np.ndarray]:
    """Exponent matrix and complex coefficient vector of a SparsePoly."""
    support = poly.support
    if not support:
        return np.zeros((0, poly.n), dtype=int), np.zeros(0, dtype=complex)
    exps = np.array(support, dtype=int)
    coefs = np.array([to_complex(poly.terms[e]) for e in support], dtype=complex)
    return exps, coefs


def monomials(exps: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.prod(x[None, :] ** exps, axis=1)


def theta_system(exps: np.ndarray, coefs: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Logarithmic gradient of sum c x^e and its Jacobian with respect to x."""
    weighted = coefs * monomials(exps, x)
    values = exps.T @ weighted
    jac = (exps.T * weighted) @ exps / x[None, :]
    return values, jac


def numerical_rank(a: np.ndarray, tol: float) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def independent_rows(a: np.ndarray, tol: float) -> List[int]:
    """Greedy selection of numerically independent rows."""
    chosen: List[int] = []
    for i in range(a.shape[0]):
        trial = chosen + [i]
        if numerical_rank(a[trial], tol) == len(trial):
            chosen = trial
    return chosen


def square_up(jac: np.ndarray, tol: float) -> Tuple[List[int], List[int]]:
    """Row and column subsets on which the Jacobian is square and well conditioned."""
    rows = independent_rows(jac, tol)
    cols = independent_rows(jac[rows].T, tol) if rows else []
    return rows, cols


def damped_newton(
    system: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    x0: np.ndarray,
    iterations: int,
    tol: float,
    guard: Callable[[np.ndarray], bool] = None,
) -> Tuple[np.ndarray, float, bool]:
    """Damped Gauss-Newton with least-squares steps and step halving.

    Args:
        system: Maps x to (residual vector, Jacobian).
        x0: Starting point.
        iterations: Iteration budget.
        tol: Residual norm accepted as converged.
        guard: Optional predicate rejecting steps (e.g. leaving the torus).

    Returns:
        (x, residual norm, converged)
    """
    x = np.array(x0, dtype=complex)
    values, jac = system(x)
    norm = float(np.linalg.norm(values))
    for _ in range(iterations):
        if not np.isfinite(norm):
            return x, norm, False
        if norm <= tol:
            return x, norm, True
        step = np.linalg.lstsq(jac, -values, rcond=None)[0]
        damping = 1.0
        improved = False
        while damping > 1e-6:
            candidate = x + damping * step
            if guard is None or guard(candidate):
                cand_values, cand_jac = system(candidate)
                cand_norm = float(np.linalg.norm(cand_values))
                if np.isfinite(cand_norm) and cand_norm < norm:
                    x, values, jac, norm = candidate, cand_values, cand_jac, cand_norm
                    improved = True
                    break
            damping /= 2
        if not improved:
            break
    return x, norm, norm <= tol


def mp_newton(
    system: Callable[[list], Tuple[list, list]],
    x0: Sequence,
    iterations: int = 30,
) -> Tuple[list, float]:
    """Plain Newton at mpmath working precision on a square system.

    Returns:
        (x, residual max-norm)
    """
    x = [mp.mpc(to_mp(v)) for v in x0]
    target = mp.mpf(10) ** (-(mp.dps - 5))
    residual = mp.inf
    for _ in range(iterations):
        values, jac = system(x)
        residual = max((abs(v) for v in values), default=mp.mpf(0))
        if residual <= target:
            break
        try:
            delta = mp.lu_solve(mp.matrix(jac), mp.matrix([-v for v in values]))
        except ZeroDivisionError:
            logger.debug("Singular Jacobian during polishing")
            break
        x = [xi + delta[i] for i, xi in enumerate(x)]
    return x, float(residual)


def mp_square_newton(
    system: Callable[[list], Tuple[list, list]],
    x0: Sequence,
    rank_tol: float,
    iterations: int = 30,
) -> Tuple[list, float]:
    """Newton at working precision on an overdetermined or rank-deficient system.

    Rows and columns are chosen once on the Jacobian at x0; the remaining
    coordinates stay fixed.

    Returns:
        (x, residual max-norm over every row)
    """
    x = [mp.mpc(to_mp(v)) for v in x0]
    values, jac = system(x)
    jac_np = np.array([[complex(v) for v in row] for row in jac], dtype=complex)
    rows, cols = square_up(jac_np, rank_tol)
    if rows:
        def square(sub):
            full = list(x)
            for c, v in zip(cols, sub):
                full[c] = v
            vals, jac_full = system(full)
            return [vals[r] for r in rows], [[jac_full[r][c] for c in cols] for r in rows]

        polished, _ = mp_newton(square, [x[c] for c in cols], iterations)
        for c, v in zip(cols, polished):
            x[c] = v
        values, _ = system(x)
    residual = max((abs(v) for v in values), default=mp.mpf(0))
    return x, float(residual)


def working_tol(scale=1):
    """Residual accepted at the current working precision."""
    return mp.mpf(10) ** (-(3 * mp.dps // 4)) * max(1, scale)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log|y| against log|x|."""
    lx = np.log(np.abs(np.asarray(xs, dtype=float)))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    return float(np.polyfit(lx, ly, 1)[0])
