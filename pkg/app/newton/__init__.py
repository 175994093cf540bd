"""Newton polyhedra and bad faces."""

from app.newton.analysis import (
    BadFace,
    NewtonData,
    bad_faces,
    maximal_bad_faces,
    classify_relatively_simple,
    dual_face_rays,
    face_polynomial,
    face_volume,
    newton_data,
    volume_bound,
)

__all__ = [
    "BadFace",
    "NewtonData",
    "bad_faces",
    "maximal_bad_faces",
    "classify_relatively_simple",
    "dual_face_rays",
    "face_polynomial",
    "face_volume",
    "newton_data",
    "volume_bound",
]
