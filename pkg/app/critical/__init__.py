"""Torus critical points and candidate values."""

from app.critical.candidates import CandidateSet, CandidateValue, candidate_values, face_polynomial_in_chart
from app.critical.solver import TorusCriticalPoint, face_critical_points, x_chart_values

__all__ = [
    "CandidateSet",
    "CandidateValue",
    "TorusCriticalPoint",
    "candidate_values",
    "face_critical_points",
    "face_polynomial_in_chart",
    "x_chart_values",
]
