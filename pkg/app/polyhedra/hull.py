"""
Exact convex hulls and face lattices in low dimension.

Facets are found by exhaustive search over affinely independent subsets of
the input points; normals are primitive integer inner normals (the face is
where the normal attains its minimum).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from app.errors import DimensionTooLarge
from app.lattice.integer import determinant, dot, nullspace, primitive, rank, rref, vec_sub

logger = logging.getLogger(__name__)

MAX_AMBIENT_DIM = 6

Point = Tuple[Fraction, ...]


@dataclass(frozen=True)
class FaceDesc:
    """A face given by its primitive inner normal, offset and vertex subset."""
    normal: Tuple[int, ...]
    offset: Fraction
    vertex_subset: Tuple[int, ...]
    dim: int


@dataclass
class Polytope:
    """Convex hull of a finite point set together with its face lattice."""
    vertices: Tuple[Point, ...]
    ambient_dim: int
    intrinsic_dim: int
    points: Tuple[Point, ...] = ()
    facets: Tuple[FaceDesc, ...] = ()
    equations: Tuple[Tuple[Tuple[int, ...], Fraction], ...] = ()
    _faces: Dict[FrozenSet[int], Tuple[int, ...]] = field(default_factory=dict, repr=False)

    def contains(self, x: Sequence) -> bool:
        """Exact membership test."""
        x = tuple(Fraction(v) for v in x)
        for normal, value in self.equations:
            if dot(normal, x) != value:
                return False
        return all(dot(f.normal, x) >= f.offset for f in self.facets)

    def face_sets(self) -> Dict[FrozenSet[int], Tuple[int, ...]]:
        """Map from each proper nonempty face (vertex index set) to the facets containing it."""
        return self._faces

    def face_dim(self, subset: FrozenSet[int]) -> int:
        pts = [self.vertices[i] for i in sorted(subset)]
        return affine_rank(pts)


def affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([vec_sub(p, base) for p in points[1:]])


def _to_fraction_points(points: Sequence[Sequence]) -> List[Point]:
    seen = {}
    for p in points:
        key = tuple(Fraction(v) for v in p)
        seen.setdefault(key, None)
    return list(seen.keys())


def _scale_to_integers(points: List[Point]) -> Tuple[List[Tuple[int, ...]], int]:
    denoms = [v.denominator for p in points for v in p]
    lcm = reduce(lambda a, b: a * b // gcd(a, b), denoms, 1)
    return [tuple(int(v * lcm) for v in p) for p in points], lcm


def _cofactor_normal(diffs: Sequence[Sequence[int]], n: int) -> Tuple[int, ...]:
    """Generalized cross product of n-1 vectors in Z^n."""
    normal = []
    for i in range(n):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        sign = -1 if i % 2 else 1
        normal.append(sign * determinant(minor))
    return tuple(normal)


def _full_dim_facets(points: List[Tuple[int, ...]], n: int) -> Dict[Tuple[int, ...], Tuple[int, FrozenSet[int]]]:
    """Exhaustive facet search for a full-dimensional integer point set."""
    facets: Dict[Tuple[int, ...], Tuple[int, FrozenSet[int]]] = {}
    if n == 1:
        values = [p[0] for p in points]
        lo, hi = min(values), max(values)
        facets[(1,)] = (lo, frozenset(i for i, v in enumerate(values) if v == lo))
        facets[(-1,)] = (-hi, frozenset(i for i, v in enumerate(values) if v == hi))
        return facets
    tested = set()
    for combo in combinations(range(len(points)), n):
        base = points[combo[0]]
        diffs = [vec_sub(points[c], base) for c in combo[1:]]
        normal = _cofactor_normal(diffs, n)
        if not any(normal):
            continue
        normal = primitive(normal)
        if next(x for x in normal if x) < 0:
            normal = tuple(-x for x in normal)
        negated = tuple(-x for x in normal)
        level = dot(normal, base)
        if (normal, level) in tested:
            continue
        tested.add((normal, level))

        values = [dot(normal, p) for p in points]
        lo, hi = min(values), max(values)
        if level == lo:
            inner, offset = normal, level
        elif level == hi:
            inner, offset = negated, -level
            values = [-v for v in values]
        else:
            continue
        on = frozenset(i for i, v in enumerate(values) if v == offset)
        facets[inner] = (offset, on)
    return facets


def _coordinate_chart(points: List[Point]) -> List[int]:
    """Coordinates on which the projection of the affine hull is injective."""
    base = points[0]
    diffs = [vec_sub(p, base) for p in points[1:]]
    _, pivots = rref(diffs)
    return pivots


def convex_hull(points: Sequence[Sequence]) -> Polytope:
    """Exact convex hull with facets and face lattice.

    Args:
        points: Nonempty list of integer or rational vectors.

    Returns:
        Polytope with irredundant vertices and inner facet normals.

    Raises:
        DimensionTooLarge: If the ambient dimension exceeds the supported bound.
    """
    pts = _to_fraction_points(points)
    if not pts:
        raise ValueError("convex_hull requires at least one point")
    n = len(pts[0])
    if n > MAX_AMBIENT_DIM:
        raise DimensionTooLarge(f"Ambient dimension {n} exceeds {MAX_AMBIENT_DIM}", dim=n)

    if len(pts) == 1:
        return Polytope(vertices=(pts[0],), ambient_dim=n, intrinsic_dim=0, points=tuple(pts),
                        equations=_affine_equations(pts, n))

    coords = _coordinate_chart(pts)
    d = len(coords)
    if d == 0:
        return Polytope(vertices=(pts[0],), ambient_dim=n, intrinsic_dim=0, points=tuple(pts),
                        equations=_affine_equations(pts, n))

    projected = [tuple(p[c] for c in coords) for p in pts]
    int_points, scale = _scale_to_integers(projected)
    raw = _full_dim_facets(int_points, d)

    # vertices: points lying on facets whose normals span R^d
    vertex_ids = []
    for i in range(len(pts)):
        normals = [nrm for nrm, (_, on) in raw.items() if i in on]
        if len(normals) >= d and rank(normals) == d:
            vertex_ids.append(i)
    position = {pid: idx for idx, pid in enumerate(vertex_ids)}

    facets = []
    facet_sets = []
    for nrm in sorted(raw):
        offset, on = raw[nrm]
        lifted = [0] * n
        for c, value in zip(coords, nrm):
            lifted[c] = value
        subset = tuple(sorted(position[i] for i in on if i in position))
        facet_sets.append(frozenset(subset))
        facets.append(FaceDesc(normal=tuple(lifted), offset=Fraction(offset, scale),
                               vertex_subset=subset, dim=d - 1))

    polytope = Polytope(
        vertices=tuple(pts[i] for i in vertex_ids),
        ambient_dim=n,
        intrinsic_dim=d,
        points=tuple(pts),
        facets=tuple(facets),
        equations=_affine_equations(pts, n),
    )
    polytope._faces = _face_lattice(facet_sets)
    logger.debug(f"Hull of {len(pts)} points: dim {d}, {len(vertex_ids)} vertices, {len(facets)} facets")
    return polytope


def _affine_equations(pts: List[Point], n: int) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    base = pts[0]
    diffs = [vec_sub(p, base) for p in pts[1:]]
    normals = nullspace(diffs, n) if diffs else nullspace([], n)
    return tuple((h, dot(h, base)) for h in normals)


def _face_lattice(facet_sets: List[FrozenSet[int]]) -> Dict[FrozenSet[int], Tuple[int, ...]]:
    """Close the facet vertex sets under intersection."""
    faces = set(facet_sets)
    frontier = list(facet_sets)
    while frontier:
        new = []
        for face in frontier:
            for facet in facet_sets:
                meet = face & facet
                if meet and meet not in faces:
                    faces.add(meet)
                    new.append(meet)
        frontier = new
    return {
        face: tuple(idx for idx, facet in enumerate(facet_sets) if face <= facet)
        for face in faces
    }


def faces(p: Polytope, dim: int) -> List[FaceDesc]:
    """All faces of the given dimension with primitive inner normals.

    The normal of a face is the sum of the normals of the facets containing
    it, so its minimum over p is attained exactly on the face.
    """
    if dim < 0 or dim > p.intrinsic_dim:
        raise ValueError(f"Face dimension {dim} outside 0..{p.intrinsic_dim}")
    if dim == p.intrinsic_dim:
        zero = tuple(0 for _ in range(p.ambient_dim))
        return [FaceDesc(normal=zero, offset=Fraction(0),
                         vertex_subset=tuple(range(len(p.vertices))), dim=dim)]

    result = []
    for subset, facet_ids in p.face_sets().items():
        if p.face_dim(subset) != dim:
            continue
        total = [0] * p.ambient_dim
        for fid in facet_ids:
            total = [a + b for a, b in zip(total, p.facets[fid].normal)]
        normal = primitive(total)
        vertex = p.vertices[min(subset)]
        result.append(FaceDesc(normal=normal, offset=dot(normal, vertex),
                               vertex_subset=tuple(sorted(subset)), dim=dim))
    result.sort(key=lambda f: f.vertex_subset)
    return result


def triangulate(p: Polytope, pick: Optional[str] = "first") -> List[Tuple[Point, ...]]:
    """Pulling triangulation of p into simplices of dimension intrinsic_dim.

    Args:
        p: Polytope.
        pick: "first" or "last": which vertex of each face is pulled.
    """
    full = frozenset(range(len(p.vertices)))
    chooser = min if pick == "first" else max

    def _split(subset: FrozenSet[int], dim: int) -> List[Tuple[int, ...]]:
        if dim == 0:
            return [(next(iter(subset)),)]
        if dim == 1:
            ends = sorted(subset)
            return [(ends[0], ends[-1])]
        apex = chooser(subset)
        simplices = []
        for face in _faces_of_dim(p, subset, dim - 1):
            if apex in face:
                continue
            for simplex in _split(face, dim - 1):
                simplices.append((apex,) + simplex)
        return simplices

    if p.intrinsic_dim == 0:
        return [(p.vertices[0],)]
    return [tuple(p.vertices[i] for i in s) for s in _split(full, p.intrinsic_dim)]


def _faces_of_dim(p: Polytope, subset: FrozenSet[int], dim: int) -> List[FrozenSet[int]]:
    return sorted(
        (face for face in p.face_sets() if face <= subset and face != subset and p.face_dim(face) == dim),
        key=lambda s: tuple(sorted(s)),
    )
