"""
Newton Analysis
Supports, Newton polyhedra, bad faces, face polynomials and the volume bound.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

from app.errors import NotFullDimensional
from app.laurent.sparse import SparsePoly
from app.lattice.integer import IntVec, dot, primitive, rank, saturated_span
from app.polyhedra.cones import ConeRep, dual_cone
from app.polyhedra.hull import FaceDesc, Polytope, convex_hull, faces
from app.polyhedra.volume import lattice_volume

logger = logging.getLogger(__name__)


# =============================================================================
# Data types
# =============================================================================

@dataclass
class NewtonData:
    """Support of f with its Newton polyhedron and the hull with the origin."""
    support: List[IntVec]
    delta: Polytope
    gamma_minus: Polytope

    @property
    def n(self) -> int:
        return self.delta.ambient_dim


@dataclass
class BadFace:
    """A face of the Newton polyhedron whose span passes through 0 and that
    is cut out by a hyperplane with a mixed-sign normal."""
    normals: Tuple[IntVec, ...]
    vertices: Tuple[IntVec, ...]
    points: Tuple[IntVec, ...]
    dim: int
    k: int
    witness: IntVec
    vertex_subset: Tuple[int, ...] = field(default=())

    def contains(self, alpha: Sequence[int]) -> bool:
        return dot(self.witness, alpha) == 0

    def describe(self) -> str:
        return f"{self.dim}-dim face on {list(self.vertices)} (codim {self.k})"


# =============================================================================
# Operations
# =============================================================================

def newton_data(f: SparsePoly) -> NewtonData:
    """Build supp(f), its Newton polyhedron and the hull of supp(f) with 0.

    Raises:
        NotFullDimensional: If the Newton polyhedron has dimension < n.
    """
    if f.is_zero():
        raise ValueError("The zero polynomial has no Newton polyhedron")
    if f.constant_term() != 0:
        raise ValueError("The polynomial must vanish at the origin")
    support = f.support
    delta = convex_hull(support)
    gamma_minus = convex_hull(support + [tuple([0] * f.n)])
    if delta.intrinsic_dim < f.n:
        raise NotFullDimensional(
            f"Newton polyhedron has dimension {delta.intrinsic_dim} < {f.n}",
            dim=delta.intrinsic_dim,
        )
    logger.info(
        f"Newton polyhedron: {len(support)} support points, "
        f"{len(delta.vertices)} vertices, {len(delta.facets)} facets"
    )
    return NewtonData(support=support, delta=delta, gamma_minus=gamma_minus)


def _as_int(v: Sequence[Fraction]) -> IntVec:
    return tuple(int(x) for x in v)


def _in_open_quadrant(y: Tuple[int, int]) -> bool:
    return y[0] > 0 and y[1] < 0


def _mixed_sign_normal(normals: Sequence[IntVec]) -> Optional[IntVec]:
    """A mixed-sign vector in the relative interior of cone(normals), if any."""
    total = [sum(col) for col in zip(*normals)]
    if any(x > 0 for x in total) and any(x < 0 for x in total):
        return primitive(total)

    n = len(total)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            base = None
            projected = [(a[i], a[j]) for a in normals]
            for a, y in zip(normals, projected):
                if _in_open_quadrant(y):
                    base = [Fraction(x) for x in a]
                    break
            if base is None:
                # (1, -1) as a nonnegative combination of two projected normals
                for (a, y), (b, z) in combinations(zip(normals, projected), 2):
                    det = y[0] * z[1] - y[1] * z[0]
                    if det == 0:
                        continue
                    mu = Fraction(1 * z[1] - (-1) * z[0], det)
                    nu = Fraction(y[0] * (-1) - y[1] * 1, det)
                    if mu >= 0 and nu >= 0:
                        base = [mu * x + nu * v for x, v in zip(a, b)]
                        break
            if base is None:
                continue
            eps = Fraction(1, 2 * (abs(total[i]) + abs(total[j]) + 1))
            scale = min(abs(base[i]), abs(base[j]))
            p = [x + eps * scale * s for x, s in zip(base, total)]
            if p[i] > 0 and p[j] < 0:
                return primitive(p)
    return None


def _is_essential(points: Sequence[IntVec]) -> bool:
    """Every point lies in the linear span of the others."""
    full = rank(points)
    for idx in range(len(points)):
        others = [p for m, p in enumerate(points) if m != idx]
        if not others or rank(others) < full:
            return False
    return True


def bad_faces(data: Union[NewtonData, Polytope]) -> List[BadFace]:
    """Enumerate every bad face of the Newton polyhedron.

    Args:
        data: NewtonData (or the Newton polyhedron itself).

    Returns:
        Bad faces sorted by (dim, vertices).
    """
    delta = data.delta if isinstance(data, NewtonData) else data
    support = data.support if isinstance(data, NewtonData) else [_as_int(p) for p in delta.points]
    n = delta.ambient_dim
    if delta.intrinsic_dim < n:
        raise NotFullDimensional(f"Newton polyhedron has dimension {delta.intrinsic_dim} < {n}")

    found: List[BadFace] = []
    face_sets = delta.face_sets()
    for dim in range(1, n):
        for face in faces(delta, dim):
            vertices = [_as_int(delta.vertices[i]) for i in face.vertex_subset]
            if rank(vertices) != dim:
                continue
            normals = [delta.facets[fid].normal for fid in face_sets[frozenset(face.vertex_subset)]]
            witness = _mixed_sign_normal(normals)
            if witness is None:
                logger.debug(f"Face {vertices} passes through 0 but has no mixed-sign normal")
                continue
            points = tuple(sorted(p for p in support if dot(witness, p) == 0))
            found.append(BadFace(
                normals=tuple(sorted(normals)),
                vertices=tuple(vertices),
                points=points,
                dim=dim,
                k=n - dim,
                witness=witness,
                vertex_subset=face.vertex_subset,
            ))

    found.sort(key=lambda b: (b.dim, b.vertices))
    logger.info(f"Found {len(found)} bad face(s)")
    return found


def maximal_bad_faces(data: Union[NewtonData, Polytope]) -> List[BadFace]:
    """Bad faces whose support points are essential and that lie in no larger such face.

    A face with a support point outside the span of the others has no torus
    critical points.
    """
    essential = [b for b in bad_faces(data) if _is_essential(b.points)]
    kept = [
        b for b in essential
        if not any(set(b.vertex_subset) < set(o.vertex_subset) for o in essential)
    ]
    logger.info(f"Kept {len(kept)} maximal essential bad face(s)")
    return kept


def face_polynomial(f: SparsePoly, face: Union[BadFace, FaceDesc]) -> SparsePoly:
    """Restriction of f to the exponents lying on the face."""
    if isinstance(face, BadFace):
        return f.restrict(lambda alpha: dot(face.witness, alpha) == 0)
    return f.restrict(lambda alpha: dot(face.normal, alpha) == face.offset)


def dual_face_rays(face: BadFace, gamma_minus: Polytope) -> List[IntVec]:
    """Extreme rays of the face of the dual of cone(supp f) orthogonal to the face."""
    generators = [_as_int(v) for v in gamma_minus.vertices if any(v)]
    dual = dual_cone(ConeRep.from_generators(generators, gamma_minus.ambient_dim))
    return sorted(a for a in dual.generators if all(dot(a, v) == 0 for v in face.vertices))


def classify_relatively_simple(face: BadFace, gamma_minus: Polytope) -> bool:
    """True iff the dual face cone is simplicial or has dimension at most 3."""
    if face.k <= 3:
        return True
    rays = dual_face_rays(face, gamma_minus)
    simple = len(rays) == rank(rays)
    logger.debug(f"Dual face cone of {face.describe()}: {len(rays)} rays, simple={simple}")
    return simple


def face_volume(face: BadFace) -> int:
    """Normalized volume of conv(face ∪ {0}) in the lattice of the face's span."""
    n = len(face.vertices[0])
    basis = saturated_span(face.vertices, n)
    hull = convex_hull(list(face.vertices) + [tuple([0] * n)])
    return lattice_volume(hull, basis)


def volume_bound(faces_: Sequence[BadFace]) -> int:
    """1 + sum of the face volumes: an upper bound on the number of asymptotic critical values."""
    total = 1 + sum(face_volume(face) for face in faces_)
    logger.info(f"Volume bound: {total}")
    return total
