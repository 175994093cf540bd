"""
The polyhedron built from the local jets, its facet with positive q'' and
the derived integers rho, L0 and the index set J.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.charts.chart import Chart, check_mu_condition
from app.errors import FacetUnstable, MuViolated, NoQualifyingFacet
from app.laurent.jets import JetSeries
from app.lattice.integer import IntVec, dot
from app.polyhedra.hull import affine_rank, convex_hull
from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)


@dataclass
class FacetData:
    """Facet data (q, rho, L0, J); J holds 1-based indices."""
    q: IntVec
    rho: int
    facet_vertices: Tuple[IntVec, ...] = ()
    facet_points: Tuple[IntVec, ...] = ()
    L0: Optional[int] = None
    J: Tuple[int, ...] = ()
    exponents: Tuple[int, ...] = ()
    deficits: Tuple[int, ...] = ()
    truncation: int = 0

    @property
    def equation_count(self) -> int:
        if self.L0 is None:
            return 0
        return max(self.L0 + 1 - self.rho, 0) * len(self.J)

    @property
    def parametric_length(self) -> int:
        return max(self.L0 - self.rho + 2, 1) if self.L0 is not None else 1

    def same_facet(self, other: "FacetData") -> bool:
        return self.q == other.q and self.rho == other.rho and self.facet_vertices == other.facet_vertices


def _minimal_per_fiber(points: Sequence[IntVec], k: int) -> List[IntVec]:
    """Drop points whose U'' part dominates another point of the same u' fiber."""
    fibers: Dict[IntVec, List[IntVec]] = {}
    for p in points:
        fibers.setdefault(p[:k], []).append(p[k:])
    kept = []
    for head, tails in fibers.items():
        for t in tails:
            dominated = any(o != t and all(a >= b for a, b in zip(t, o)) for o in tails)
            if not dominated:
                kept.append(head + t)
    return sorted(kept)


def _slice_dim(points: Sequence[IntVec]) -> int:
    return affine_rank(points) if points else -1


def build_delta_star_and_facet(jets: Sequence[JetSeries], k: int) -> FacetData:
    """Find the facet with positive q'' and the required slice dimension.

    Args:
        jets: Jets of <mu_j, theta_u f^W> at the base point.
        k: Codimension of the bad face.

    Returns:
        FacetData with q, rho and the facet (L0 and J still unset).

    Raises:
        NoQualifyingFacet: If the polyhedron is degenerate or no facet qualifies.
    """
    support = sorted({beta for jet in jets for beta in jet.support})
    if not support:
        raise NoQualifyingFacet("All jets vanish to the truncation order")
    n = len(support[0])
    points = _minimal_per_fiber(support, k)
    # one step up each U'' axis from every point; no facet with q'' > 0 passes through these
    reach = 1 + max(max(p[k:], default=0) for p in points)
    lifted = {p[:j] + (p[j] + reach,) + p[j + 1:] for p in points for j in range(k, n)}
    hull = convex_hull(sorted(set(points) | lifted))
    if hull.intrinsic_dim < n:
        raise NoQualifyingFacet(
            f"Jet polyhedron has dimension {hull.intrinsic_dim} < {n}", points=points
        )

    candidates = []
    for facet in hull.facets:
        q = facet.normal
        rho = facet.offset
        if any(x <= 0 for x in q[k:]) or rho <= 0:
            continue
        on = [tuple(int(x) for x in hull.vertices[i]) for i in facet.vertex_subset]
        on_points = [p for p in points if dot(q, p) == rho]
        tail_slice = [p for p in on_points if not any(p[:k])]
        if _slice_dim(tail_slice) != n - k - 1:
            continue
        head_slice = [p for p in on_points if not any(p[k:])]
        preferred = _slice_dim(head_slice) == k - 1
        candidates.append((not preferred, q, int(rho), tuple(on), tuple(on_points)))

    if not candidates:
        raise NoQualifyingFacet("No facet with positive q'' meets the slice dimension condition", points=points)
    candidates.sort(key=lambda c: (c[0], c[1]))
    _, q, rho, on, on_points = candidates[0]
    logger.debug(f"Facet: q={q}, rho={rho}, {len(on)} vertices ({len(candidates)} qualifying)")
    return FacetData(q=q, rho=rho, facet_vertices=on, facet_points=on_points)


def find_facet(
    jet_factory: Callable[[int, Sequence[int]], List[JetSeries]],
    k: int,
    n: int,
    rules: Optional[ToleranceRules] = None,
) -> FacetData:
    """Facet search with truncation deepening until two consecutive depths agree.

    Args:
        jet_factory: Maps (max_weight, weight) to the n pairing jets.
        k: Codimension of the bad face.
        n: Ambient dimension.
        rules: Numeric rules.

    Raises:
        FacetUnstable: If the facet keeps changing within the round budget.
    """
    rules = rules or ToleranceRules()
    weight = tuple([0] * k + [1] * (n - k))
    depth = rules.get("facet_truncation")
    step = rules.get("facet_deepening")
    current = build_delta_star_and_facet(jet_factory(depth, weight), k)
    for round_idx in range(rules.get("facet_rounds")):
        deeper = build_delta_star_and_facet(jet_factory(depth + step, weight), k)
        if deeper.same_facet(current):
            current.truncation = depth
            logger.info(f"Facet stable at truncation {depth}: q={current.q}, rho={current.rho}")
            return current
        logger.debug(f"Facet changed between truncation {depth} and {depth + step}")
        depth += step
        current = deeper
    raise FacetUnstable(f"Facet did not stabilize up to truncation {depth}", q=current.q)


def compute_L0_J(q: Sequence[int], chart: Chart) -> Tuple[int, Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
    """L0 = max_{i != j} <(q',0), w_i - w_j> and J = {j : some e_i < e_j}.

    Returns:
        (L0, J 1-based, leading exponents e, deficits D_j = e_j - min_{i != j} e_i)

    Raises:
        MuViolated: If (q', 0) fails condition (mu) for the chart.
    """
    k = chart.k
    q_prime = tuple(q[:k])
    if not check_mu_condition(chart, q_prime):
        raise MuViolated(f"(mu) fails for q'={q_prime}: no exponent <(q',0), w_i> is negative", q=tuple(q))
    e = chart.leading_exponents(q_prime)
    n = len(e)
    deficits = tuple(e[j] - min(e[i] for i in range(n) if i != j) for j in range(n))
    l0 = max(e) - min(e)
    j_set = tuple(j + 1 for j in range(n) if deficits[j] > 0)
    logger.info(f"Leading exponents {e}: L0={l0}, J={set(j_set)}")
    return l0, j_set, e, deficits


def complete_facet(facet: FacetData, chart: Chart) -> FacetData:
    l0, j_set, e, deficits = compute_L0_J(facet.q, chart)
    facet.L0, facet.J, facet.exponents, facet.deficits = l0, j_set, e, deficits
    return facet
