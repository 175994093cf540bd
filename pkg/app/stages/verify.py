"""
Stage 5: Verification
Order bookkeeping and numeric sampling of every synthesized witness.
A witness that fails is rebuilt at doubled precision up to the configured cap.
"""

import logging
from typing import Any, Dict

from mpmath import mp

from app.critical.solver import repolish_point
from app.errors import ACVError, VerificationFailed
from app.orchestrator.state import PipelineState
from app.stages.base import Stage
from app.stages.witness import build_witness
from app.verifier.numeric import numeric_verify
from app.verifier.orders import symbolic_order_check

logger = logging.getLogger(__name__)


class VerifyStage(Stage):
    """Stage responsible for checking the witness curves."""

    name = "verify"

    def run(self, state: PipelineState) -> Dict[str, Any]:
        witnesses = []
        for entry in state["witnesses"]:
            entry = dict(entry)
            if entry["error"] is None:
                entry = self._check(state, entry)
                if not self._passed(entry):
                    entry = self._escalate(state, entry)
            witnesses.append(entry)

        failed = [w for w in witnesses if w["error_module"] == VerificationFailed.module]
        if failed:
            logger.warning(f"{len(failed)} witness curve(s) did not pass verification")
        return {"witnesses": witnesses, "completed": True}

    def _check(self, state: PipelineState, entry: Dict[str, Any]) -> Dict[str, Any]:
        f = state["polynomial"]
        try:
            chart = entry["curve"].chart
            entry["orders"] = symbolic_order_check(entry["curve"], entry["facet"], f_w=chart.transform(f))
            entry["verification"] = numeric_verify(f, entry["witness"], entry["target"], state["grid"], self.rules)
        except ACVError as e:
            logger.error(f"Verification of face {entry['face_index']} witness failed: {e.describe()}")
            entry.update(error=e.describe(), error_module=e.module, exit_code=e.exit_code)
        return entry

    @staticmethod
    def _passed(entry: Dict[str, Any]) -> bool:
        return entry["error"] is None and entry["verification"] is not None and entry["verification"].passed

    def _escalate(self, state: PipelineState, entry: Dict[str, Any]) -> Dict[str, Any]:
        """Rebuild and recheck the witness at doubled precision until it passes or the cap is reached."""
        cap = self.rules.get("max_precision")
        precision = entry["precision"]
        idx, chart = entry["face_index"], entry["curve"].chart
        f_w = chart.transform(state["polynomial"])
        current = entry
        while not self._passed(current) and precision < cap:
            precision = min(2 * precision, cap)
            logger.info(f"Face {idx} witness for {mp.nstr(entry['target'], 10)}: retrying at {precision} digits")
            with mp.workdps(precision):
                point = repolish_point(entry["face_poly"], entry["point"], self.rules)
                rebuilt = build_witness(idx, chart, f_w, entry["face_poly"], point, self.rules, state["seed"])
                if rebuilt["error"] is None:
                    rebuilt = self._check(state, rebuilt)
            current = rebuilt

        if self._passed(current):
            return current
        if current["error"] is None:
            v = current["verification"]
            error = VerificationFailed(
                f"Checks failed at {current['precision']} digits (growth {v.growth_ok}, "
                f"decay {v.decay_ok}, limit {v.limit_ok})"
            )
            logger.error(f"Face {idx} witness: {error.describe()}")
            current.update(error=error.describe(), error_module=error.module, exit_code=error.exit_code)
        return current
