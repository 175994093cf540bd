"""
Order bookkeeping of the pairings along a synthesized curve.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

from mpmath import mp

from app.curves.facet import FacetData
from app.curves.synthesis import CurveJet, pairing_series
from app.errors import OrderShortfall
from app.laurent.jets import mu_pairings
from app.laurent.sparse import SparsePoly

logger = logging.getLogger(__name__)


@dataclass
class OrderRow:
    j: int  # 1-based
    order: int
    deficit: int
    in_j: bool
    ok: bool

    @property
    def margin(self) -> int:
        """-D_j + ord, required to be positive."""
        return self.order - self.deficit


def symbolic_order_check(
    curve: CurveJet,
    facet: FacetData,
    f_w: Optional[SparsePoly] = None,
    pairings: Optional[Sequence[SparsePoly]] = None,
) -> List[OrderRow]:
    """ord_t G_j(Q(t)) for every j, checked against D_j = max_{i != j} <(q',0), w_j - w_i>.

    The series are expanded to t^{L0+1}; an order equal to L0 + 2 means
    "at least L0 + 2".

    Raises:
        OrderShortfall: For the first j with ord <= D_j.
    """
    if pairings is None:
        if f_w is None:
            raise ValueError("Either f_w or the pairings are required")
        pairings = mu_pairings(curve.chart, f_w)
    n = curve.chart.n
    prec = facet.L0 + 2
    series = pairing_series(curve, pairings, list(range(n)), prec)
    noise = mp.mpf(10) ** (-(mp.dps // 2))

    rows = []
    for j, s in enumerate(series):
        scale = max(1, sum(abs(mp.mpf(c.numerator) / c.denominator) for c in pairings[j].terms.values()))
        order = s.valuation(is_zero=lambda c: abs(c) <= noise * scale)
        deficit = facet.deficits[j]
        rows.append(OrderRow(j=j + 1, order=order, deficit=deficit, in_j=(j + 1) in facet.J, ok=order > deficit))
    for row in rows:
        logger.debug(f"ord G_{row.j} = {row.order}, D_{row.j} = {row.deficit}")
        if not row.ok:
            raise OrderShortfall(
                f"ord G_{row.j}(Q(t)) = {row.order} does not exceed D_{row.j} = {row.deficit}",
                j=row.j, order=row.order, deficit=row.deficit,
            )
    logger.info(f"Order check passed for all {n} pairings (L0={facet.L0})")
    return rows
