"""
Local expansion of Laurent polynomials at a base point u* = (0, u''*).

The chart coordinates u' = (u_1..u_k) stay as they are; every other
coordinate is shifted, u_j = u_j* + U_j, and negative powers are re-expanded
as geometric series in U_j / u_j*.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterator, List, Sequence, Tuple

from mpmath import mp

from app.errors import ExpansionPole
from app.laurent.sparse import SparsePoly, log_gradient
from app.lattice.integer import IntVec, dot
from app.utils.numeric import to_mp

if TYPE_CHECKING:
    from app.charts.chart import Chart

logger = logging.getLogger(__name__)


@dataclass
class JetSeries:
    """Truncated series in (u', U'') with nonnegative exponents."""
    base_point: Tuple
    terms: Dict[IntVec, object]
    truncation_order: int
    weight: IntVec
    k: int = 0
    dropped: int = field(default=0, repr=False)

    @property
    def support(self) -> List[IntVec]:
        return sorted(self.terms)

    def coefficient(self, beta: Sequence[int]):
        return self.terms.get(tuple(beta), 0)

    def evaluate(self, delta: Sequence):
        """Value at u' = delta[:k], U'' = delta[k:]."""
        total = 0
        for beta, coef in self.terms.items():
            term = coef
            for x, e in zip(delta, beta):
                if e:
                    term *= x ** e
            total += term
        return total

    def min_weight(self, q: Sequence[int]) -> int:
        return min((dot(q, beta) for beta in self.terms), default=None)

    def restrict_weight(self, q: Sequence[int], bound: int) -> "JetSeries":
        kept = {b: c for b, c in self.terms.items() if dot(q, b) <= bound}
        return JetSeries(self.base_point, kept, bound, tuple(q), self.k)


def binomial(e: int, l: int) -> Fraction:
    """Generalized binomial coefficient C(e, l) for any integer e."""
    value = Fraction(1)
    for i in range(l):
        value = value * (e - i) / (i + 1)
    return value


def _shift_factors(e: int, base, step_weight: int, budget: int) -> Iterator[Tuple[int, object]]:
    """Pairs (l, C(e, l) base^(e - l)) of (base + U)^e with step_weight * l <= budget."""
    l = 0
    while step_weight * l <= budget and (e < 0 or l <= e):
        yield l, to_mp(binomial(e, l)) * base ** (e - l)
        l += 1


def local_expand(
    g: SparsePoly,
    chart: "Chart",
    u_star: Sequence,
    max_weight: int,
    weight: Sequence[int],
) -> JetSeries:
    """Truncated expansion of g at (0, u''*) in the coordinates (u', U'').

    Args:
        g: Laurent polynomial in u.
        chart: Chart supplying k.
        u_star: Base values u''* (length n - k) or a full point whose first k entries are 0.
        max_weight: Keep exponents with <weight, beta> <= max_weight.
        weight: Integer weight, strictly positive on the U'' coordinates.

    Returns:
        JetSeries with mpmath coefficients at the current working precision.

    Raises:
        ExpansionPole: If a negative power cannot be expanded.
    """
    n, k = g.n, chart.k
    if len(u_star) == n:
        u_star = tuple(u_star)[k:]
    base = [mp.mpc(to_mp(v)) for v in u_star]
    if any(abs(b) == 0 for b in base):
        raise ExpansionPole("Base point has a zero coordinate off the chart axes")
    weight = tuple(weight)
    if any(wt <= 0 for wt in weight[k:]):
        raise ValueError(f"Weight {weight} must be positive on the shifted coordinates")

    terms: Dict[IntVec, object] = {}
    mass: Dict[IntVec, object] = {}
    for beta, coef in g.terms.items():
        head = beta[:k]
        if any(e < 0 for e in head):
            raise ExpansionPole(f"Term {beta} has a negative power of a chart axis", exponent=beta)
        if not any(head) and any(e < 0 for e in beta[k:]):
            raise ExpansionPole(f"Term {beta} has a negative power with no chart-axis factor", exponent=beta)
        budget = max_weight - dot(weight[:k], head)
        if budget < 0:
            continue

        partial = [((), to_mp(coef), budget)]
        for j in range(k, n):
            grown = []
            for exps, value, left in partial:
                for l, factor in _shift_factors(beta[j], base[j - k], weight[j], left):
                    grown.append((exps + (l,), value * factor, left - weight[j] * l))
            partial = grown
        for exps, value, _ in partial:
            key = head + exps
            terms[key] = terms.get(key, 0) + value
            mass[key] = mass.get(key, 0) + abs(value)

    eps = mp.mpf(10) ** (-(mp.dps // 2))
    kept = {key: value for key, value in terms.items() if abs(value) > eps * mass[key]}
    jet = JetSeries(tuple(base), kept, max_weight, weight, k, dropped=len(terms) - len(kept))
    logger.debug(f"Local expansion: {len(kept)} terms up to weight {max_weight} ({jet.dropped} cancelled)")
    return jet


def mu_pairings(chart: "Chart", f_w: SparsePoly) -> List[SparsePoly]:
    """Exact G_j = <mu_j, theta_u f^W>, i.e. theta_{x_j} f written in u."""
    theta = log_gradient(f_w)
    pairings = []
    for j in range(chart.n):
        mu = chart.mu(j)
        g = SparsePoly(f_w.n)
        for i, coef in enumerate(mu):
            if coef:
                g = g + theta[i] * coef
        pairings.append(g)
    return pairings


def mu_pair_jets(
    chart: "Chart",
    f_w: SparsePoly,
    u_star: Sequence,
    max_weight: int,
    weight: Sequence[int],
) -> List[JetSeries]:
    """Jets of <mu_j, theta_u f^W> for j = 1..n."""
    return [local_expand(g, chart, u_star, max_weight, weight) for g in mu_pairings(chart, f_w)]
