"""
Curve synthesis: coefficients of the truncated curve Q(t) in a toric chart.

    u_i(t) = t^{q_i} (c_i(0) + c_i(1) t + ...)            for i < k
    u_i(t) = u_i* + t^{q_i} (c_i(0) + c_i(1) t + ...)     for i >= k

The coefficient of t^{rho + l} in G_j(Q(t)) = <mu_j, theta_u f^W>(Q(t)) is
a polynomial in c(0) for l = 0 and affine in c(l) for l > 0, with the
Jacobian of the order-0 system as its linear part. The order-0 system is
solved by pinned multistart; every later order is a linear solve.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from app.charts.chart import Chart
from app.critical.solver import TorusCriticalPoint
from app.curves.facet import FacetData, complete_facet, find_facet
from app.curves.series import TSeries, substitute
from app.errors import LinearSolveInconsistent, Order0SolveFailed
from app.laurent.jets import binomial, local_expand, mu_pairings
from app.laurent.sparse import SparsePoly, log_gradient
from app.lattice.integer import IntVec, dot
from app.rules.tolerances import ToleranceRules
from app.utils.numeric import (
    damped_newton,
    mp_square_newton,
    poly_arrays,
    square_up,
    theta_system,
    to_complex,
    to_mp,
    working_tol,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Curve jet
# =============================================================================

@dataclass
class CurveJet:
    """Truncated curve Q(t) in chart coordinates.

    coefficients[l][i] is c_i(l); the last order is the free all-ones order.
    """
    chart: Chart
    u_star: Tuple
    q: IntVec
    coefficients: List[List]
    rho: int
    L0: int
    J: Tuple[int, ...]
    reduced_system: bool = False
    residual: float = 0.0
    order0_pattern: Tuple[int, ...] = field(default=(), repr=False)

    @property
    def length(self) -> int:
        return len(self.coefficients)

    @property
    def k(self) -> int:
        return self.chart.k

    def starts(self) -> List[int]:
        return [self.q[i] if i < self.k else 0 for i in range(self.chart.n)]

    def component_terms(self, i: int) -> dict:
        """u_i(t) as a finite Laurent polynomial {exponent: coefficient}."""
        terms = {}
        if i >= self.k:
            terms[0] = self.u_star[i]
        for ell, row in enumerate(self.coefficients):
            e = self.q[i] + ell
            terms[e] = terms.get(e, 0) + row[i]
        return {e: c for e, c in terms.items() if c != 0}

    def component_series(self, i: int, rel: int) -> TSeries:
        zero = mp.mpc(0)
        if i < self.k:
            coeffs = [row[i] for row in self.coefficients[:rel]]
            return TSeries(self.q[i], coeffs + [zero] * (rel - len(coeffs)))
        coeffs = [zero] * max(rel, 1)
        coeffs[0] = self.u_star[i]
        for ell, row in enumerate(self.coefficients):
            if self.q[i] + ell < len(coeffs):
                coeffs[self.q[i] + ell] += row[i]
        return TSeries(0, coeffs)

    def evaluate_u(self, t) -> List:
        return [sum(c * t ** e for e, c in self.component_terms(i).items()) for i in range(self.chart.n)]


def pairing_series(curve: CurveJet, pairings: Sequence[SparsePoly], indices: Sequence[int], prec: int) -> List[TSeries]:
    """Series of G_j(Q(t)) to absolute precision prec for the 0-based indices given."""
    starts = curve.starts()
    low = min(
        (sum(e * s for e, s in zip(exp, starts)) for j in indices for exp in pairings[j].terms),
        default=0,
    )
    rel = max(prec - low, 1)
    components = [curve.component_series(i, rel) for i in range(curve.chart.n)]
    cache: dict = {}
    return [substitute(pairings[j], components, prec, convert=to_mp, starts=starts, cache=cache) for j in indices]


# =============================================================================
# Order-rho system
# =============================================================================

def _tail_exponents(bounds: Sequence[Optional[int]], weights: Sequence[int], target: int) -> List[IntVec]:
    """All beta >= 0 with <weights, beta> = target and beta_i <= bounds[i] where bounded."""
    found: List[IntVec] = []

    def extend(i: int, left: int, acc: Tuple[int, ...]):
        if i == len(weights):
            if left == 0:
                found.append(acc)
            return
        cap = left // weights[i]
        if bounds[i] is not None:
            cap = min(cap, bounds[i])
        for b in range(cap + 1):
            extend(i + 1, left - b * weights[i], acc + (b,))

    if target >= 0:
        extend(0, target, ())
    return found


class LeadingSystem:
    """The order-rho coefficients g^j_rho as functions of c(0) and the base point u''."""

    def __init__(self, pairings: Sequence[SparsePoly], indices: Sequence[int], q: Sequence[int], rho: int, k: int):
        self.k = k
        self.n = len(q)
        self.indices = tuple(indices)
        self.rows: List[List[Tuple]] = []
        for j in self.indices:
            terms = []
            for alpha, coef in pairings[j].terms.items():
                target = rho - dot(q[:k], alpha[:k])
                bounds = [a if a >= 0 else None for a in alpha[k:]]
                for tail in _tail_exponents(bounds, q[k:], target):
                    factor = coef
                    for a, b in zip(alpha[k:], tail):
                        factor = factor * binomial(a, b)
                    shift = tuple(a - b for a, b in zip(alpha[k:], tail))
                    terms.append((factor, shift, tuple(alpha[:k]) + tail))
            self.rows.append(terms)

    def __len__(self) -> int:
        return len(self.rows)

    def values(self, c: Sequence, u2: Sequence, convert: Callable) -> List:
        out = []
        for terms in self.rows:
            total = 0
            for factor, shift, beta in terms:
                term = convert(factor)
                for x, e in zip(u2, shift):
                    if e:
                        term = term * x ** e
                for x, e in zip(c, beta):
                    if e:
                        term = term * x ** e
                total = total + term
            out.append(total)
        return out

    def jacobian(self, c: Sequence, u2: Sequence, convert: Callable) -> List[List]:
        """Derivatives with respect to c(0)."""
        jac = []
        for terms in self.rows:
            row = [0] * self.n
            for factor, shift, beta in terms:
                base = convert(factor)
                for x, e in zip(u2, shift):
                    if e:
                        base = base * x ** e
                for m in range(self.n):
                    if not beta[m]:
                        continue
                    term = base * beta[m]
                    for i, (x, e) in enumerate(zip(c, beta)):
                        power = e - 1 if i == m else e
                        if power:
                            term = term * x ** power
                    row[m] = row[m] + term
            jac.append(row)
        return jac

    def base_jacobian(self, c: Sequence, u2: Sequence, convert: Callable) -> List[List]:
        """Derivatives with respect to the base point u''."""
        jac = []
        for terms in self.rows:
            row = [0] * len(u2)
            for factor, shift, beta in terms:
                base = convert(factor)
                for x, e in zip(c, beta):
                    if e:
                        base = base * x ** e
                for m, s in enumerate(shift):
                    if not s:
                        continue
                    term = base * s
                    for i, (x, e) in enumerate(zip(u2, shift)):
                        power = e - 1 if i == m else e
                        if power:
                            term = term * x ** power
                    row[m] = row[m] + term
            jac.append(row)
        return jac

    def mass(self) -> float:
        return max((sum(abs(float(f)) for f, _, _ in terms) for terms in self.rows), default=1.0)


def _order0_starts(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    """Random starts; the first half real with random signs."""
    moduli = np.exp(rng.uniform(np.log(0.2), np.log(5.0), size=(count, m)))
    phases = rng.uniform(0, 2 * np.pi, size=(count, m))
    real = count // 2
    phases[:real] = np.pi * rng.integers(0, 2, size=(real, m))
    return moduli * np.exp(1j * phases)


def _patterns(n: int, m: int) -> List[Tuple[int, ...]]:
    return list(reversed(list(combinations(range(n), m))))


def _fill(n: int, free: Sequence[int], values: Sequence, one) -> list:
    c = [one] * n
    for i, v in zip(free, values):
        c[i] = v
    return c


def solve_order0(
    system: LeadingSystem,
    u2: Sequence,
    rules: ToleranceRules,
    rng: np.random.Generator,
) -> Optional[Tuple[List, Tuple[int, ...]]]:
    """Pinned multistart for g^j_rho(c(0)) = 0 with every entry of c(0) nonzero.

    Returns:
        (c(0) at working precision, free coordinates) or None.
    """
    n, m = system.n, len(system)
    floor = rules.get("genericity_floor")
    u2_c = [to_complex(v) for v in u2]
    u2_mp = [mp.mpc(to_mp(v)) for v in u2]
    accepted = working_tol(system.mass())
    for free in _patterns(n, m):
        free_idx = list(free)

        def sub(x):
            c = _fill(n, free_idx, x, 1.0 + 0j)
            values = np.array(system.values(c, u2_c, to_complex), dtype=complex)
            jac = np.array(system.jacobian(c, u2_c, to_complex), dtype=complex)[:, free_idx]
            return values, jac

        def square(x):
            c = _fill(n, free_idx, x, mp.mpc(1))
            values = system.values(c, u2_mp, to_mp)
            jac = system.jacobian(c, u2_mp, to_mp)
            return values, [[row[i] for i in free_idx] for row in jac]

        for x0 in _order0_starts(rng, rules.get("order0_starts"), m):
            x, _, ok = damped_newton(sub, x0, rules.get("order0_iterations"), rules.get("residual_tol"))
            if not ok or np.any(np.abs(x) < floor) or np.any(np.abs(x) > 1e8):
                continue
            polished, residual = mp_square_newton(square, list(x), rules.get("rank_tol"))
            if residual > accepted or any(abs(v) < floor for v in polished):
                continue
            logger.debug(f"Order-0 solution with free coordinates {free}: residual {residual:.2e}")
            return _fill(n, free_idx, polished, mp.mpc(1)), free
    return None


def refine_base_point(
    system: LeadingSystem,
    face_poly: SparsePoly,
    u2: Sequence,
    target,
    rules: ToleranceRules,
    rng: np.random.Generator,
) -> Optional[Tuple]:
    """Move u'' along the critical locus of the face polynomial until the order-0 system has a generic solution.

    Solves (g^j_rho(c, u'') = 0, theta f_face(u'') = 0, f_face(u'') = target) jointly,
    by Gauss-Newton in double precision and then at the working precision.

    Returns:
        Refined u'' at working precision, or None.
    """
    n, m, d = system.n, len(system), len(u2)
    floor = rules.get("genericity_floor")
    eps = rules.get("torus_eps")
    exps, coefs = poly_arrays(face_poly)
    base = np.array([to_complex(v) for v in u2], dtype=complex)
    target_c = to_complex(target)
    theta = log_gradient(face_poly)
    second = [[t.derivative(i) for i in range(d)] for t in theta]
    accepted = working_tol(max(system.mass(), abs(target_c)))

    for free in _patterns(n, m):
        free_idx = list(free)

        def joint(z):
            c, point = _fill(n, free_idx, z[:m], 1.0 + 0j), z[m:]
            leading = np.array(system.values(c, point, to_complex), dtype=complex)
            dc = np.array(system.jacobian(c, point, to_complex), dtype=complex)[:, free_idx]
            du = np.array(system.base_jacobian(c, point, to_complex), dtype=complex)
            grad, hess = theta_system(exps, coefs, point)
            value = np.dot(coefs, np.prod(point[None, :] ** exps, axis=1)) - target_c
            values = np.concatenate([leading, grad, [value]])
            jac = np.vstack([
                np.hstack([dc, du]),
                np.hstack([np.zeros((d, m), dtype=complex), hess]),
                np.concatenate([np.zeros(m, dtype=complex), grad / point])[None, :],
            ])
            return values, jac

        def joint_mp(z):
            c, point = _fill(n, free_idx, z[:m], mp.mpc(1)), z[m:]
            dc = system.jacobian(c, point, to_mp)
            du = system.base_jacobian(c, point, to_mp)
            grad = [t.evaluate(point, convert=to_mp) for t in theta]
            values = system.values(c, point, to_mp) + grad
            values.append(face_poly.evaluate(point, convert=to_mp) - target)
            jac = [[dc[r][i] for i in free_idx] + du[r] for r in range(m)]
            jac += [[0] * m + [h.evaluate(point, convert=to_mp) for h in row] for row in second]
            jac.append([0] * m + [g / x for g, x in zip(grad, point)])
            return values, jac

        def on_torus(z):
            return bool(np.all(np.abs(z) > eps))

        for x0 in _order0_starts(rng, rules.get("order0_starts"), m):
            z0 = np.concatenate([x0, base])
            z, _, ok = damped_newton(joint, z0, rules.get("order0_iterations"), rules.get("residual_tol"), guard=on_torus)
            if not ok or np.any(np.abs(z[:m]) < floor):
                continue
            polished, residual = mp_square_newton(joint_mp, list(z), rules.get("rank_tol"))
            if residual > accepted or any(abs(v) < floor for v in polished[:m]):
                continue
            logger.info(f"Refined base point along the critical locus (free {free}, residual {residual:.2e})")
            return tuple(polished[m:])
    return None


# =============================================================================
# Higher orders
# =============================================================================

def _linear_order(a_mp: List[List], r: List, rows: Sequence[int], rules: ToleranceRules) -> Tuple[List, bool]:
    """Solve A x = -r on the given rows; returns (x, consistent)."""
    n = len(a_mp[0]) if a_mp else 0
    x = [mp.mpc(0)] * n
    if not rows:
        return x, True
    a_np = np.array([[to_complex(v) for v in a_mp[i]] for i in rows], dtype=complex)
    picked, cols = square_up(a_np, rules.get("rank_tol"))
    picked = [rows[i] for i in picked]
    if picked:
        matrix = mp.matrix([[a_mp[i][j] for j in cols] for i in picked])
        rhs = mp.matrix([-r[i] for i in picked])
        solution = mp.lu_solve(matrix, rhs)
        for pos, j in enumerate(cols):
            x[j] = solution[pos]
    scale = 1 + max(abs(r[i]) for i in rows)
    tol = mp.mpf(10) ** (-(mp.dps // 2))
    mismatch = max(abs(sum(a_mp[i][j] * x[j] for j in range(n)) + r[i]) for i in rows)
    return x, mismatch <= tol * scale


def synthesize_curve(
    chart: Chart,
    f_w: SparsePoly,
    u_star: Sequence,
    facet: FacetData,
    rules: Optional[ToleranceRules] = None,
    seed: int = 0,
    pairings: Optional[List[SparsePoly]] = None,
) -> CurveJet:
    """Solve the triangular system g^j_{rho+l}(c) = 0 for j in J and l = 0..L0-rho.

    Args:
        chart: Chart of the bad face.
        f_w: f^W.
        u_star: Base point u''* (length n - k) or full (0, u''*).
        facet: Completed facet data (q, rho, L0, J).
        rules: Numeric rules.
        seed: Seed of the order-0 multistart.
        pairings: Precomputed G_j = <mu_j, theta_u f^W>.

    Returns:
        CurveJet of parametric length L0 - rho + 2.

    Raises:
        Order0SolveFailed: If no generic order-0 solution is found.
        LinearSolveInconsistent: If a higher order has no solution even for the reduced system.
    """
    rules = rules or ToleranceRules()
    n, k = chart.n, chart.k
    u2 = tuple(mp.mpc(to_mp(v)) for v in (tuple(u_star)[k:] if len(u_star) == n else u_star))
    full_star = tuple([mp.mpc(0)] * k) + u2
    pairings = pairings or mu_pairings(chart, f_w)
    rho, l0 = facet.rho, facet.L0
    indices = [j - 1 for j in facet.J]
    length = max(l0 - rho + 2, 1)
    ones = [mp.mpc(1)] * n

    if not indices:
        coefficients = [ones] + [[mp.mpc(0)] * n for _ in range(length - 1)]
        logger.info("J is empty: no equations, all-ones leading coefficients")
        return CurveJet(chart, full_star, tuple(facet.q), coefficients, rho, l0, facet.J)

    rng = np.random.default_rng(seed)
    active = list(indices)
    system = LeadingSystem(pairings, active, facet.q, rho, k)
    solved = solve_order0(system, u2, rules, rng)
    reduced = False
    if solved is None:
        required = [j for j in indices if facet.deficits[j] >= rho]
        if len(required) == len(indices):
            raise Order0SolveFailed(
                f"No order-0 solution with all coordinates of modulus >= {rules.get('genericity_floor')}",
                q=tuple(facet.q), J=facet.J,
            )
        # rows with D_j < rho already vanish to order rho > D_j
        reduced, active = True, required
        logger.warning(f"Full order-0 system has no generic solution, keeping indices {[j + 1 for j in active]}")
        system = LeadingSystem(pairings, active, facet.q, rho, k)
        solved = solve_order0(system, u2, rules, rng) if active else (list(ones), ())
        if solved is None:
            raise Order0SolveFailed(
                f"No order-0 solution for the per-index requirements {[j + 1 for j in active]}",
                q=tuple(facet.q), J=facet.J,
            )
    c0, pattern = solved
    coefficients = [c0] + [[mp.mpc(0)] * n for _ in range(length - 1)]
    curve = CurveJet(chart, full_star, tuple(facet.q), coefficients, rho, l0, facet.J,
                     reduced_system=reduced, order0_pattern=pattern)

    a_mp = system.jacobian(c0, u2, to_mp) if active else []
    for ell in range(1, l0 - rho + 1):
        rows = list(range(len(active)))
        if curve.reduced_system:
            rows = [pos for pos in rows if facet.deficits[active[pos]] - rho >= ell]
        if not rows:
            continue
        series = pairing_series(curve, pairings, active, rho + ell + 1)
        r = [s.coefficient(rho + ell) for s in series]
        x, consistent = _linear_order(a_mp, r, rows, rules)
        if not consistent and not curve.reduced_system:
            rows = [pos for pos in rows if facet.deficits[active[pos]] - rho >= ell]
            x, consistent = _linear_order(a_mp, r, rows, rules)
            curve.reduced_system = True
            logger.warning(f"Order {ell}: full system inconsistent, using per-index requirements on rows {rows}")
        if not consistent:
            raise LinearSolveInconsistent(
                f"Linear system of order {ell} is inconsistent even for the reduced requirements",
                order=ell, rows=rows,
            )
        curve.coefficients[ell] = x
    if length > 1:
        curve.coefficients[length - 1] = list(ones)

    curve.residual = _residual(curve, pairings, indices, facet, rules)
    logger.info(
        f"Synthesized curve of length {curve.length} (q={tuple(facet.q)}, rho={rho}, L0={l0}, "
        f"J={set(facet.J)}), residual {curve.residual:.2e}"
    )
    return curve


def _residual(curve: CurveJet, pairings, indices, facet: FacetData, rules: ToleranceRules) -> float:
    """Largest required coefficient of G_j(Q(t)) below t^{L0+1}."""
    series = pairing_series(curve, pairings, indices, facet.L0 + 1)
    worst = mp.mpf(0)
    for j, s in zip(indices, series):
        top = facet.L0 - facet.rho
        if curve.reduced_system:
            top = min(top, facet.deficits[j] - facet.rho)
        for ell in range(0, top + 1):
            worst = max(worst, abs(s.coefficient(facet.rho + ell)))
    scale = max(1.0, max(sum(abs(float(c)) for c in pairings[j].terms.values()) for j in indices))
    if worst > 1e-9 * scale:
        raise LinearSolveInconsistent(f"Curve residual {float(worst):.2e} exceeds 1e-9", residual=float(worst))
    return float(worst)


# =============================================================================
# Base point to curve
# =============================================================================

def locate_facet(
    chart: Chart,
    pairings: Sequence[SparsePoly],
    u2: Sequence,
    rules: ToleranceRules,
) -> FacetData:
    """Stable facet of the jet polyhedron at (0, u''), completed with L0 and J."""
    def jets(depth, weight):
        return [local_expand(g, chart, u2, depth, weight) for g in pairings]

    facet = find_facet(jets, chart.k, chart.n, rules)
    return complete_facet(facet, chart)


def synthesize_for_point(
    chart: Chart,
    f_w: SparsePoly,
    face_poly: SparsePoly,
    point: TorusCriticalPoint,
    rules: Optional[ToleranceRules] = None,
    seed: int = 0,
) -> Tuple[CurveJet, FacetData]:
    """Facet search and curve synthesis for one critical point, refining the base point on non-isolated loci.

    Raises:
        Order0SolveFailed: If synthesis fails at the original and every refined base point.
    """
    rules = rules or ToleranceRules()
    pairings = mu_pairings(chart, f_w)
    u2 = tuple(point.u_double_prime)
    rounds = 1 if point.isolated else 1 + rules.get("refine_rounds")
    rng = np.random.default_rng(seed)
    for round_idx in range(rounds):
        facet = locate_facet(chart, pairings, u2, rules)
        try:
            return synthesize_curve(chart, f_w, u2, facet, rules, seed, pairings), facet
        except Order0SolveFailed:
            if round_idx == rounds - 1:
                raise
            system = LeadingSystem(pairings, [j - 1 for j in facet.J], facet.q, facet.rho, chart.k)
            refined = refine_base_point(system, face_poly, u2, point.value, rules, rng)
            if refined is None:
                raise
            u2 = tuple(refined)
    raise Order0SolveFailed("Base point refinement exhausted")
