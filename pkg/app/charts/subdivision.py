"""
Unimodular subdivision of rational cones by repeated star subdivision.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import List, Optional, Sequence, Tuple

from app.errors import SubdivisionBudgetExceeded
from app.lattice.integer import (
    IntVec,
    determinant,
    lattice_coordinates,
    primitive,
    rank,
    rational_inverse,
    saturated_span,
)
from app.polyhedra.cones import ConeRep, contains
from app.polyhedra.hull import convex_hull, triangulate
from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)


@dataclass
class SubdividedFan:
    """Simplicial unimodular cones covering a source cone."""
    cones: List[ConeRep]
    source: ConeRep
    steps: int = 0

    def maximal(self) -> List[ConeRep]:
        top = max((c.dim for c in self.cones), default=0)
        return [c for c in self.cones if c.dim == top]


def _simplicial_pieces(gens: List[IntVec], r: int) -> List[List[IntVec]]:
    """Split a full-dimensional cone in Z^r into simplicial cones."""
    if len(gens) == r:
        return [gens]
    origin = tuple([0] * r)
    hull = convex_hull([origin] + gens)
    pieces = []
    for simplex in triangulate(hull, pick="first"):
        rays = [tuple(int(x) for x in v) for v in simplex if any(v)]
        if len(rays) == r and rank(rays) == r:
            pieces.append(rays)
    return pieces


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


def _parallelepiped_group(gens: List[IntVec]) -> List[Tuple[Fraction, ...]]:
    """Coefficient vectors of the lattice points in the half-open fundamental parallelepiped."""
    r = len(gens)
    inverse = rational_inverse(gens)
    # lambda(e_j) = row j of G^{-1}, reduced mod 1
    steps = [tuple(_frac(x) for x in inverse[j]) for j in range(r)]
    zero = tuple(Fraction(0) for _ in range(r))
    group = {zero}
    frontier = [zero]
    while frontier:
        new = []
        for lam in frontier:
            for s in steps:
                moved = tuple(_frac(a + b) for a, b in zip(lam, s))
                if moved not in group:
                    group.add(moved)
                    new.append(moved)
        frontier = new
    return sorted(group - {zero}, key=lambda lam: (sum(lam), lam))


def _star_split(gens: List[IntVec]) -> List[List[IntVec]]:
    lam = _parallelepiped_group(gens)[0]
    point = [sum(l * g[c] for l, g in zip(lam, gens)) for c in range(len(gens))]
    ray = primitive(point)
    return [gens[:i] + [ray] + gens[i + 1:] for i, l in enumerate(lam) if l != 0]


def unimodular_subdivide(c: ConeRep, rules: Optional[ToleranceRules] = None) -> SubdividedFan:
    """Subdivide a pointed cone into simplicial cones unimodular in the lattice of its span.

    Args:
        c: Cone to subdivide.
        rules: Numeric rules (subdivision budget).

    Returns:
        SubdividedFan whose maximal cones cover c.

    Raises:
        SubdivisionBudgetExceeded: If more star subdivisions than the budget are needed.
    """
    rules = rules or ToleranceRules()
    budget = rules.get("subdivision_budget")
    n = c.ambient_dim
    basis = saturated_span(c.generators, n)
    r = len(basis)
    if r == 0:
        return SubdividedFan(cones=[], source=c)

    local = [tuple(int(x) for x in lattice_coordinates(basis, g)) for g in c.generators]
    queue = _simplicial_pieces(local, r)
    done: List[List[IntVec]] = []
    steps = 0
    while queue:
        gens = queue.pop()
        if abs(determinant(gens)) == 1:
            done.append(gens)
            continue
        steps += 1
        if steps > budget:
            raise SubdivisionBudgetExceeded(
                f"Unimodular subdivision needs more than {budget} star subdivisions",
                cone=c.generators,
            )
        queue.extend(_star_split(gens))

    def lift(v: IntVec) -> IntVec:
        return tuple(sum(x * b[j] for x, b in zip(v, basis)) for j in range(n))

    cones = [ConeRep.from_generators(sorted(lift(g) for g in gens), n) for gens in done]
    cones.sort(key=lambda cone: cone.generators)
    logger.debug(f"Subdivided cone with {len(c.generators)} rays into {len(cones)} unimodular cones ({steps} splits)")
    return SubdividedFan(cones=cones, source=c, steps=steps)


def multiplicity(c: ConeRep) -> int:
    """Index of the generator lattice in the lattice of the span (simplicial cones)."""
    basis = saturated_span(c.generators, c.ambient_dim)
    local = [tuple(int(x) for x in lattice_coordinates(basis, g)) for g in c.generators]
    return abs(determinant(local))


def covering_cone(fan: SubdividedFan, x: Sequence) -> List[int]:
    """Indices of the maximal cones of the fan containing x."""
    return [i for i, cone in enumerate(fan.cones) if contains(cone, x)]
