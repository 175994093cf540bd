"""Toric charts adapted to bad faces."""

from app.charts.chart import Chart, build_chart, check_mu_condition, validate_chart
from app.charts.subdivision import SubdividedFan, multiplicity, unimodular_subdivide

__all__ = [
    "Chart",
    "SubdividedFan",
    "build_chart",
    "check_mu_condition",
    "multiplicity",
    "unimodular_subdivide",
    "validate_chart",
]
