"""
Witness curves X(t) in the original coordinates x_i = u(t)^{w_i}.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from mpmath import mp

from app.charts.chart import Chart
from app.curves.synthesis import CurveJet
from app.laurent.sparse import SparsePoly
from app.utils.numeric import to_mp

logger = logging.getLogger(__name__)

Factor = Tuple[SparsePoly, int]


def t_poly(terms: Union[SparsePoly, Dict[int, object]]) -> SparsePoly:
    """Laurent polynomial in t from {exponent: coefficient}."""
    if isinstance(terms, SparsePoly):
        return terms
    return SparsePoly(1, {(e,): c for e, c in terms.items()})


def _power(p: SparsePoly, e: int) -> SparsePoly:
    result = p
    for _ in range(e - 1):
        result = result * p
    return result


@dataclass
class WitnessCurve:
    """Each component x_i(t) is a product of Laurent polynomials in t raised to integer powers."""
    factors: List[List[Factor]]
    target: object
    face_index: int = 0
    leading_exponents: Tuple[int, ...] = ()
    source: str = field(default="synthesized")

    @property
    def n(self) -> int:
        return len(self.factors)

    def evaluate(self, t) -> List:
        """x(t) at working precision."""
        t = to_mp(t)
        values = []
        for component in self.factors:
            value = mp.mpf(1)
            for poly, e in component:
                value = value * poly.evaluate([t], convert=to_mp) ** e
            values.append(value)
        return values

    def expanded(self, i: int) -> Tuple[SparsePoly, SparsePoly]:
        """(numerator, denominator) of x_i(t) with the powers multiplied out."""
        num = SparsePoly.constant(1, 1)
        den = SparsePoly.constant(1, 1)
        for poly, e in self.factors[i]:
            if e > 0:
                num = num * _power(poly, e)
            elif e < 0:
                den = den * _power(poly, -e)
        return num, den

    def has_real_coefficients(self, tol: float = 1e-12) -> bool:
        for component in self.factors:
            for poly, _ in component:
                for coef in poly.terms.values():
                    if abs(mp.im(to_mp(coef))) > tol * max(1, abs(to_mp(coef))):
                        return False
        return True


def push_to_x(curve: CurveJet, chart: Optional[Chart] = None, target=None, face_index: int = 0) -> WitnessCurve:
    """X(t) with x_i(t) = prod_j u_j(t)^{W_ij}."""
    chart = chart or curve.chart
    components = [t_poly(curve.component_terms(j)) for j in range(chart.n)]
    factors = []
    for i in range(chart.n):
        factors.append([(components[j], chart.W[i][j]) for j in range(chart.n) if chart.W[i][j]])
    leading = chart.leading_exponents(curve.q[:chart.k])
    logger.debug(f"Witness curve leading exponents {leading}")
    return WitnessCurve(factors, target, face_index, tuple(leading))


def witness_from_components(
    components: Sequence[Sequence[Tuple[Union[SparsePoly, Dict[int, object]], int]]],
    target,
    source: str = "explicit",
) -> WitnessCurve:
    """Wrap explicit rational curves given as products of Laurent polynomials in t."""
    factors = [[(t_poly(terms), e) for terms, e in component] for component in components]
    return WitnessCurve(factors, target, source=source)
