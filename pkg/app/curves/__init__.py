"""Facet data, curve synthesis and witness curves."""

from app.curves.facet import FacetData, build_delta_star_and_facet, compute_L0_J, find_facet
from app.curves.series import TSeries, substitute
from app.curves.synthesis import CurveJet, pairing_series, synthesize_curve, synthesize_for_point
from app.curves.witness import WitnessCurve, push_to_x, witness_from_components

__all__ = [
    "CurveJet",
    "FacetData",
    "TSeries",
    "WitnessCurve",
    "build_delta_star_and_facet",
    "compute_L0_J",
    "find_facet",
    "pairing_series",
    "push_to_x",
    "substitute",
    "synthesize_curve",
    "synthesize_for_point",
    "witness_from_components",
]
