"""
Torus critical points of face polynomials.

Univariate faces are solved exactly up to root isolation (square-free
derivative, then mpmath polynomial roots). Multivariate faces use seeded
multistart damped Newton in double precision followed by polishing at the
working precision.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp
from sympy import Poly, Rational, Symbol

from app.errors import SolverBudgetExhausted
from app.laurent.sparse import SparsePoly, log_gradient
from app.rules.tolerances import ToleranceRules
from app.utils.numeric import (
    damped_newton,
    monomials,
    mp_newton,
    numerical_rank,
    poly_arrays,
    square_up,
    theta_system,
    to_mp,
)

logger = logging.getLogger(__name__)


@dataclass
class TorusCriticalPoint:
    """A critical point of a face polynomial on the complex torus."""
    u_double_prime: Tuple
    value: object
    residual: float
    isolated: bool = True

    def as_complex(self) -> Tuple[complex, ...]:
        return tuple(complex(v) for v in self.u_double_prime)

    @property
    def complex_value(self) -> complex:
        return complex(self.value)


def close(a, b, tol: float) -> bool:
    """Relative closeness of two complex numbers."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# =============================================================================
# Univariate path
# =============================================================================

def _univariate_points(g: SparsePoly, rules: ToleranceRules) -> List[TorusCriticalPoint]:
    x = Symbol("u")
    poly = Poly.from_dict({exp: Rational(c.numerator, c.denominator) for exp, c in g.terms.items()}, x)
    derivative = poly.diff(x)
    if derivative.is_zero:
        return []
    reduced = derivative.sqf_part()
    if reduced.degree() < 1:
        return []

    coeffs = [mp.mpf(int(c.p)) / int(c.q) for c in reduced.all_coeffs()]
    roots = mp.polyroots(coeffs, maxsteps=200, extraprec=2 * mp.dps)
    eps = rules.get("torus_eps")
    theta = log_gradient(g)[0]
    points = []
    for root in roots:
        root = mp.mpc(root)
        if abs(root) <= eps:
            continue
        value = g.evaluate([root], convert=to_mp)
        residual = float(abs(theta.evaluate([root], convert=to_mp)))
        points.append(TorusCriticalPoint((root,), value, residual, isolated=True))
    logger.debug(f"Univariate face: {len(points)} torus critical point(s) of degree-{poly.degree()} polynomial")
    return points


# =============================================================================
# Multivariate path
# =============================================================================

def _random_starts(rng: np.random.Generator, count: int, m: int, modulus: Tuple[float, float]) -> np.ndarray:
    lo, hi = np.log(modulus[0]), np.log(modulus[1])
    radii = np.exp(rng.uniform(lo, hi, size=(count, m)))
    phases = rng.uniform(0, 2 * np.pi, size=(count, m))
    return radii * np.exp(1j * phases)


def multistart(
    g: SparsePoly,
    rules: ToleranceRules,
    rng: np.random.Generator,
    count: Optional[int] = None,
) -> List[np.ndarray]:
    """Converged torus solutions of theta g = 0 from random starts (duplicates merged).

    A solution is kept only when its residual is small relative to the terms
    of theta g, so points where every monomial of g tends to 0 are rejected.
    """
    exps, coefs = poly_arrays(g)
    eps = rules.get("torus_eps")
    tol = rules.get("residual_tol")
    relative = rules.get("relative_residual_tol")
    dedup = rules.get("dedup_tol")
    starts = _random_starts(rng, count or rules.get("newton_starts"), g.n, rules.get("start_modulus"))

    def system(x):
        return theta_system(exps, coefs, x)

    def on_torus(x):
        return bool(np.all(np.abs(x) > eps)) and bool(np.all(np.abs(x) < 1e12))

    found: List[np.ndarray] = []
    for x0 in starts:
        x, residual, ok = damped_newton(system, x0, rules.get("newton_iterations"), tol, guard=on_torus)
        if not ok or not on_torus(x):
            continue
        scale = float(np.linalg.norm(np.abs(exps.T) @ np.abs(coefs * monomials(exps, x))))
        if residual > relative * scale:
            logger.debug(f"Rejected start: residual {residual:.2e} against term size {scale:.2e}")
            continue
        if any(np.all(np.abs(x - y) <= dedup * np.maximum(1.0, np.abs(y))) for y in found):
            continue
        found.append(x)
    return found


def polish_critical_point(g: SparsePoly, x: np.ndarray, rules: ToleranceRules) -> Tuple[Tuple, float]:
    """Polish a double-precision critical point at the working precision."""
    exps, coefs = poly_arrays(g)
    _, jac = theta_system(exps, coefs, x)
    rows, cols = square_up(jac, rules.get("rank_tol"))
    theta = log_gradient(g)
    point = [mp.mpc(complex(v)) for v in x]
    if not rows:
        return tuple(point), 0.0
    second = [[theta[r].derivative(c) for c in cols] for r in rows]

    def square(sub):
        full = list(point)
        for c, v in zip(cols, sub):
            full[c] = v
        values = [theta[r].evaluate(full, convert=to_mp) for r in rows]
        jac_rows = [[d.evaluate(full, convert=to_mp) for d in row] for row in second]
        return values, jac_rows

    polished, _ = mp_newton(square, [point[c] for c in cols])
    for c, v in zip(cols, polished):
        point[c] = v
    residual = max(float(abs(t.evaluate(point, convert=to_mp))) for t in theta)
    return tuple(point), residual


def face_critical_points(
    g: SparsePoly,
    rules: Optional[ToleranceRules] = None,
    seed: int = 0,
) -> List[TorusCriticalPoint]:
    """Critical points of a polynomial g on the torus.

    Args:
        g: Polynomial (nonnegative exponents) in the face variables.
        rules: Numeric rules.
        seed: Seed of the multistart generator.

    Returns:
        Points sorted by value; one representative per value on positive-dimensional loci.

    Raises:
        SolverBudgetExhausted: If the last multistart round still discovers new values.
    """
    rules = rules or ToleranceRules()
    if not g.is_polynomial():
        raise ValueError("Face polynomial in the chart variables must have nonnegative exponents")
    if g.n == 1:
        return _sorted(_univariate_points(g, rules))

    rng = np.random.default_rng(seed)
    dedup = rules.get("dedup_tol")
    exps, coefs = poly_arrays(g)
    raw: List[np.ndarray] = []
    values: List[complex] = []
    rounds = rules.get("newton_rounds")
    for round_idx in range(rounds):
        batch = multistart(g, rules, rng)
        new_values = 0
        for x in batch:
            if any(np.all(np.abs(x - y) <= dedup * np.maximum(1.0, np.abs(y))) for y in raw):
                continue
            raw.append(x)
            value = complex(np.dot(coefs, np.prod(x[None, :] ** exps, axis=1)))
            if not any(close(value, v, dedup) for v in values):
                values.append(value)
                new_values += 1
        logger.debug(f"Multistart round {round_idx + 1}: {len(batch)} converged, {new_values} new value(s)")
        if round_idx > 0 and new_values == 0:
            break
    else:
        if rounds > 1 and new_values:
            partial = _group(g, raw, rules)
            raise SolverBudgetExhausted(
                f"Multistart still found {new_values} new critical value(s) in its last round",
                partial=partial,
            )
    return _group(g, raw, rules)


def _group(g: SparsePoly, raw: List[np.ndarray], rules: ToleranceRules) -> List[TorusCriticalPoint]:
    """Flag positive-dimensional loci and keep one representative per value there."""
    exps, coefs = poly_arrays(g)
    dedup = rules.get("dedup_tol")
    rank_tol = rules.get("rank_tol")
    min_points = rules.get("nonisolated_min_points")

    groups: List[List[Tuple[complex, np.ndarray]]] = []
    for x in sorted(raw, key=lambda y: tuple(np.round(np.concatenate([y.real, y.imag]), 10))):
        value = complex(np.dot(coefs, np.prod(x[None, :] ** exps, axis=1)))
        for grp in groups:
            if close(grp[0][0], value, dedup):
                grp.append((value, x))
                break
        else:
            groups.append([(value, x)])

    points: List[TorusCriticalPoint] = []
    for grp in groups:
        degenerate = []
        for _, x in grp:
            _, jac = theta_system(exps, coefs, x)
            degenerate.append(numerical_rank(jac, rank_tol) < g.n)
        nonisolated = len(grp) >= min_points or all(degenerate)
        members = [grp[0]] if nonisolated else grp
        for _, x in members:
            point, residual = polish_critical_point(g, x, rules)
            value = g.evaluate(point, convert=to_mp)
            points.append(TorusCriticalPoint(point, value, residual, isolated=not nonisolated))
    logger.debug(f"Grouped {len(raw)} solution(s) into {len(groups)} value group(s)")
    return _sorted(points)


def repolish_point(g: SparsePoly, point: TorusCriticalPoint, rules: ToleranceRules) -> TorusCriticalPoint:
    """The same critical point recomputed at the current working precision."""
    if g.n == 1:
        roots = _univariate_points(g, rules)
        if roots:
            return min(roots, key=lambda p: abs(p.u_double_prime[0] - point.u_double_prime[0]))
        return point
    polished, residual = polish_critical_point(g, np.array(point.as_complex(), dtype=complex), rules)
    return TorusCriticalPoint(polished, g.evaluate(polished, convert=to_mp), residual, isolated=point.isolated)


def _sorted(points: List[TorusCriticalPoint]) -> List[TorusCriticalPoint]:
    def key(p):
        v = complex(p.value)
        return (round(v.real, 8), round(v.imag, 8), tuple(round(abs(c), 8) for c in p.as_complex()))
    return sorted(points, key=key)


def x_chart_values(f_face: SparsePoly, rules: Optional[ToleranceRules] = None, seed: int = 0) -> List[complex]:
    """Critical values of a face polynomial computed directly on (C*)^n."""
    rules = rules or ToleranceRules()
    rng = np.random.default_rng(seed)
    exps, coefs = poly_arrays(f_face)
    dedup = rules.get("dedup_tol")
    values: List[complex] = []
    for x in multistart(f_face, rules, rng):
        value = complex(np.dot(coefs, np.prod(x[None, :] ** exps, axis=1)))
        if not any(close(value, v, dedup) for v in values):
            values.append(value)
    return sorted(values, key=lambda v: (round(v.real, 8), round(v.imag, 8)))


def values_of(points: Sequence[TorusCriticalPoint]) -> List[complex]:
    return [p.complex_value for p in points]
