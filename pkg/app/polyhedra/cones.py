"""
Rational polyhedral cones: dual cones, membership and extreme rays.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Sequence, Tuple

from app.lattice.integer import IntVec, dot, nullspace, primitive, rank
from app.lattice.unimodular import is_saturated

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeRep:
    """Cone generated by nonnegative combinations of integer vectors."""
    generators: Tuple[IntVec, ...]
    ambient_dim: int

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]], ambient_dim: int = None) -> "ConeRep":
        gens = []
        for g in generators:
            p = primitive(g)
            if any(p) and p not in gens:
                gens.append(p)
        if ambient_dim is None:
            if not generators:
                raise ValueError("ambient_dim required for an empty cone")
            ambient_dim = len(generators[0])
        return cls(generators=tuple(gens), ambient_dim=ambient_dim)

    @property
    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @property
    def simplicial(self) -> bool:
        return len(self.generators) == self.dim

    @property
    def unimodular(self) -> bool:
        return self.simplicial and is_saturated(self.generators)


def dual_cone(c: ConeRep) -> ConeRep:
    """Generators of {a : <a, x> >= 0 for all x in c}.

    The lineality space (the orthogonal complement of c's span) is returned
    as pairs of opposite generators.
    """
    n = c.ambient_dim
    gens = list(c.generators)
    r = rank(gens) if gens else 0
    lineality = nullspace(gens, n) if gens else [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]

    rays: List[IntVec] = []
    if r > 0:
        for subset in combinations(gens, r - 1):
            if r > 1 and rank(list(subset)) != r - 1:
                continue
            constraints = list(subset) + list(lineality)
            kernel = nullspace(constraints, n) if constraints else None
            if kernel is None:
                # r == 1 with no lineality: the ray itself spans the dual direction
                kernel = [gens[0]]
            if len(kernel) != 1:
                continue
            a = kernel[0]
            values = [dot(a, g) for g in gens]
            if all(v >= 0 for v in values):
                candidate = a
            elif all(v <= 0 for v in values):
                candidate = tuple(-x for x in a)
            else:
                continue
            if any(dot(candidate, g) != 0 for g in gens) and candidate not in rays:
                rays.append(candidate)

    generators = rays[:]
    for h in lineality:
        generators.append(tuple(h))
        generators.append(tuple(-x for x in h))
    return ConeRep.from_generators(generators, n)


def contains(c: ConeRep, x: Sequence) -> bool:
    """Exact membership via the inequalities of the dual cone."""
    return all(dot(a, x) >= 0 for a in dual_cone(c).generators)


def interior_contains(c: ConeRep, x: Sequence) -> bool:
    """Membership in the relative interior of c."""
    dual = dual_cone(c).generators
    lineal = {g for g in dual if tuple(-v for v in g) in dual}
    for a in dual:
        value = dot(a, x)
        if a in lineal:
            if value != 0:
                return False
        elif value <= 0:
            return False
    return True


def extreme_rays(c: ConeRep) -> Tuple[List[IntVec], List[IntVec]]:
    """Extreme rays and a lineality basis of c."""
    double = dual_cone(dual_cone(c))
    gens = list(double.generators)
    lineal = [g for g in gens if tuple(-v for v in g) in gens]
    rays = [g for g in gens if g not in lineal]
    basis: List[IntVec] = []
    for g in lineal:
        if rank(basis + [g]) > len(basis):
            basis.append(g)
    return rays, basis


def same_cone(a: ConeRep, b: ConeRep) -> bool:
    return all(contains(b, g) for g in a.generators) and all(contains(a, g) for g in b.generators)
