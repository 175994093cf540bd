"""Exact polytopes, cones and lattice volumes."""

from app.polyhedra.cones import ConeRep, contains, dual_cone, extreme_rays, interior_contains, same_cone
from app.polyhedra.hull import FaceDesc, Polytope, affine_rank, convex_hull, faces, triangulate
from app.polyhedra.volume import lattice_volume

__all__ = [
    "ConeRep",
    "FaceDesc",
    "Polytope",
    "affine_rank",
    "contains",
    "convex_hull",
    "dual_cone",
    "extreme_rays",
    "faces",
    "interior_contains",
    "lattice_volume",
    "same_cone",
    "triangulate",
]
