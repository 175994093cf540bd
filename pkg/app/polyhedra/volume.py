"""
Normalized lattice volumes.
"""

import logging
from fractions import Fraction
from math import factorial
from typing import List, Sequence

from app.errors import PointsOffLattice
from app.lattice.integer import determinant, lattice_coordinates, vec_sub
from app.polyhedra.hull import Polytope, convex_hull, triangulate

logger = logging.getLogger(__name__)


def _to_lattice(points: Sequence[Sequence], basis: Sequence[Sequence[int]]) -> List[tuple]:
    coords = []
    for v in points:
        c = lattice_coordinates(basis, v)
        if c is None or any(Fraction(x).denominator != 1 for x in c):
            raise PointsOffLattice(f"Point {tuple(v)} is not in the lattice spanned by the basis", point=tuple(v))
        coords.append(tuple(int(x) for x in c))
    return coords


def simplex_volume(simplex: Sequence[Sequence[int]]) -> int:
    """|det| of the edge vectors of a full-dimensional lattice simplex."""
    base = simplex[0]
    return abs(determinant([vec_sub(v, base) for v in simplex[1:]]))


def lattice_volume(p: Polytope, lattice_basis: Sequence[Sequence[int]], pick: str = "first") -> int:
    """Normalized volume of p in the lattice spanned by lattice_basis.

    The elementary simplex has volume 1, i.e. the result is d! times the
    Euclidean volume in lattice coordinates.

    Args:
        p: Polytope whose vertices lie in the lattice.
        lattice_basis: Basis of the lattice (rows).
        pick: Pulling order of the triangulation.

    Returns:
        Nonnegative integer (0 when p is not full-dimensional in the lattice span).

    Raises:
        PointsOffLattice: If a vertex has non-integral lattice coordinates.
    """
    d = len(lattice_basis)
    coords = _to_lattice(p.vertices, lattice_basis)
    if d == 0:
        return 0
    local = convex_hull(coords)
    if local.intrinsic_dim < d:
        return 0
    total = sum(simplex_volume(s) for s in triangulate(local, pick=pick))
    logger.debug(f"Normalized volume {total} (Euclidean {Fraction(total, factorial(d))})")
    return total
