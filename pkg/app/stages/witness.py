"""
Stage 4: Witness curves
Facet data, curve synthesis and the image X(t) for every critical point.
"""

import logging
from typing import Any, Dict, List

import numpy as np
from mpmath import mp

from app.charts.chart import Chart
from app.critical.candidates import face_polynomial_in_chart
from app.critical.solver import TorusCriticalPoint
from app.curves.synthesis import synthesize_for_point
from app.curves.witness import push_to_x
from app.errors import ACVError, ParseError
from app.laurent.sparse import SparsePoly, log_gradient
from app.orchestrator.state import PipelineState
from app.rules.tolerances import ToleranceRules
from app.stages.base import Stage
from app.utils.numeric import mp_square_newton, numerical_rank, to_mp

logger = logging.getLogger(__name__)


def override_point(face_poly: SparsePoly, values, rules: ToleranceRules) -> TorusCriticalPoint:
    """A user-supplied base point u''*, polished onto the critical locus at the working precision.

    Exact rationals are converted at the current precision, so a rational
    critical point stays exact up to rounding.
    """
    point = [mp.mpc(to_mp(v)) for v in values]
    if len(point) != face_poly.n:
        raise ParseError(f"u_star needs {face_poly.n} entries, got {len(point)}", field="u_star")
    theta = log_gradient(face_poly)
    second = [[t.derivative(i) for i in range(face_poly.n)] for t in theta]

    def system(x):
        return (
            [t.evaluate(x, convert=to_mp) for t in theta],
            [[d.evaluate(x, convert=to_mp) for d in row] for row in second],
        )

    polished, residual = mp_square_newton(system, point, rules.get("rank_tol"))
    _, jac = system(polished)
    rank = numerical_rank(np.array([[complex(v) for v in row] for row in jac], dtype=complex), rules.get("rank_tol"))
    isolated = face_poly.n == 1 or rank == face_poly.n
    logger.info(f"Base point override polished to residual {residual:.2e} ({'isolated' if isolated else 'on a locus'})")
    return TorusCriticalPoint(tuple(polished), face_poly.evaluate(polished, convert=to_mp), residual, isolated=isolated)


def build_witness(
    idx: int,
    chart: Chart,
    f_w: SparsePoly,
    face_poly: SparsePoly,
    point: TorusCriticalPoint,
    rules: ToleranceRules,
    seed: int,
) -> Dict[str, Any]:
    """Witness entry for one critical point at the current working precision."""
    entry: Dict[str, Any] = {
        "face_index": idx,
        "point": point,
        "target": point.value,
        "face_poly": face_poly,
        "precision": mp.dps,
        "facet": None,
        "curve": None,
        "witness": None,
        "orders": [],
        "verification": None,
        "error": None,
        "error_module": None,
        "exit_code": 0,
    }
    try:
        curve, facet = synthesize_for_point(chart, f_w, face_poly, point, rules, seed)
    except ACVError as e:
        logger.error(f"Witness for value {mp.nstr(point.value, 10)} on face {idx}: {e.describe()}")
        entry.update(error=e.describe(), error_module=e.module, exit_code=e.exit_code)
        return entry
    entry.update(facet=facet, curve=curve, witness=push_to_x(curve, chart, point.value, idx))
    logger.info(f"Witness for value {mp.nstr(point.value, 10)} on face {idx}: length {curve.length}")
    return entry


class WitnessStage(Stage):
    """Stage responsible for one witness curve per critical point."""

    name = "witness"

    def run(self, state: PipelineState) -> Dict[str, Any]:
        f = state["polynomial"]
        override = state["spec"].base_point_override()
        witnesses: List[Dict[str, Any]] = []
        for idx, (face, (chart, _)) in enumerate(zip(state["bad_faces"], state["charts"])):
            face_poly = face_polynomial_in_chart(f, face, chart)
            points = state["critical_points"].get(idx, [])
            if idx == 0 and override is not None:
                points = [override_point(face_poly, override, self.rules)]
            f_w = chart.transform(f)
            for point in points:
                witnesses.append(build_witness(idx, chart, f_w, face_poly, point, self.rules, state["seed"]))
        failed = sum(1 for w in witnesses if w["error"])
        if failed:
            logger.warning(f"{failed} of {len(witnesses)} witness curve(s) could not be synthesized")
        return {"witnesses": witnesses}
