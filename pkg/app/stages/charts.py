"""
Stage 2: Toric charts
One chart per bad face, user-supplied or built automatically.
"""

import logging
from typing import Any, Dict

from app.charts.chart import build_chart
from app.errors import NoPositiveCompletion
from app.orchestrator.state import PipelineState
from app.stages.base import Stage

logger = logging.getLogger(__name__)


class ChartStage(Stage):
    """Stage responsible for the toric chart of every bad face."""

    name = "charts"

    def run(self, state: PipelineState) -> Dict[str, Any]:
        spec = state["spec"]
        data = state["newton_data"]
        charts = []
        for idx, face in enumerate(state["bad_faces"]):
            user_w = spec.user_chart(idx)
            try:
                chart = build_chart(face, data, user_w=user_w, rules=self.rules)
            except NoPositiveCompletion as e:
                logger.warning(f"Face {idx}: {e}; falling back to a completion without positive dual rows")
                chart = build_chart(face, data, require_positive=False, rules=self.rules)
            charts.append((chart, user_w is not None))
        return {"charts": charts}
