"""
Stage 1: Newton analysis
Newton polyhedron, bad faces and the volume bound.
"""

import logging
from typing import Any, Dict

from app.newton.analysis import bad_faces, maximal_bad_faces, newton_data, volume_bound
from app.orchestrator.state import PipelineState
from app.stages.base import Stage

logger = logging.getLogger(__name__)


class NewtonStage(Stage):
    """Stage responsible for the polyhedral analysis of f."""

    name = "newton"

    def run(self, state: PipelineState) -> Dict[str, Any]:
        f = state["spec"].polynomial()
        data = newton_data(f)
        exhaustive = state.get("exhaustive_faces", False)
        faces = bad_faces(data) if exhaustive else maximal_bad_faces(data)
        bound = volume_bound(faces)
        logger.info(f"Newton stage: {len(faces)} {'' if exhaustive else 'maximal '}bad face(s), bound {bound}")
        return {
            "polynomial": f,
            "newton_data": data,
            "bad_faces": faces,
            "volume_bound": bound,
        }
