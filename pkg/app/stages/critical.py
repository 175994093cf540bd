"""
Stage 3: Critical points
Torus critical points of the face polynomials and the candidate set.
"""

import logging
from typing import Any, Dict

from app.critical.candidates import candidate_values, face_polynomial_in_chart
from app.critical.solver import face_critical_points
from app.errors import SolverBudgetExhausted
from app.orchestrator.state import PipelineState
from app.stages.base import Stage

logger = logging.getLogger(__name__)


class CriticalStage(Stage):
    """Stage responsible for the critical values of every bad face."""

    name = "critical"

    def run(self, state: PipelineState) -> Dict[str, Any]:
        f = state["polynomial"]
        faces = state["bad_faces"]
        charts = [chart for chart, _ in state["charts"]]
        seed = state["seed"]
        critical = {}
        exhausted = None
        for idx, (face, chart) in enumerate(zip(faces, charts)):
            g = face_polynomial_in_chart(f, face, chart)
            try:
                critical[idx] = face_critical_points(g, self.rules, seed)
            except SolverBudgetExhausted as e:
                logger.error(f"Face {idx}: {e.describe()}")
                critical[idx] = e.partial
                exhausted = exhausted or e
            logger.info(f"Face {idx}: {len(critical[idx])} critical point(s)")
        candidates = candidate_values(
            f, faces, charts,
            nondegenerate=state["nondegenerate"],
            critical=critical,
            cross_check=True,
            rules=self.rules,
            seed=seed,
        )
        update = {"critical_points": critical, "candidates": candidates}
        if exhausted is not None:
            update.update(error=exhausted.describe(), error_module=exhausted.module, exit_code=exhausted.exit_code)
        return update
