"""
Shared behaviour of pipeline stages.
"""

import logging
from typing import Any, Dict

from mpmath import mp

from app.errors import ACVError
from app.orchestrator.state import PipelineState
from app.rules.tolerances import ToleranceRules

logger = logging.getLogger(__name__)


class Stage:
    """A callable pipeline stage; ACVErrors become error entries in the state."""

    name = "stage"

    def __init__(self, rules: ToleranceRules = None):
        self.rules = rules or ToleranceRules()

    def run(self, state: PipelineState) -> Dict[str, Any]:
        raise NotImplementedError

    def __call__(self, state: PipelineState) -> Dict[str, Any]:
        """Make the stage callable for LangGraph integration."""
        try:
            with mp.workdps(state.get("precision") or self.rules.get("working_precision")):
                update = self.run(state)
        except ACVError as e:
            logger.error(f"{self.name} failed: {e.describe()}")
            return {
                "current_stage": self.name,
                "error": e.describe(),
                "error_module": e.module,
                "exit_code": e.exit_code,
            }
        update["current_stage"] = self.name
        return update
