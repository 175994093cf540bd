"""
LangGraph Workflow Orchestrator
Coordinates the ACV pipeline: Newton analysis, charts, critical points,
witness curves and their verification.
"""

import logging
import time
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from langgraph.graph import END, StateGraph
from mpmath import mp

from app.curves.witness import WitnessCurve
from app.newton.analysis import classify_relatively_simple, dual_face_rays, face_polynomial
from app.orchestrator.state import (
    LAST_STAGE,
    BadFaceReport,
    CandidateReport,
    ChartReport,
    Command,
    ComplexValue,
    CriticalPointReport,
    FacetReport,
    OrderReport,
    PipelineState,
    ProblemSpec,
    RunReport,
    VerificationSummary,
    WitnessReport,
    create_initial_state,
)
from app.rules.tolerances import ToleranceRules
from app.stages import ChartStage, CriticalStage, NewtonStage, VerifyStage, WitnessStage
from app.utils.settings import Settings

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

STAGES = ["newton", "charts", "critical", "witness", "verify"]


class ACVPipeline:
    """Main orchestrator for the asymptotic critical value pipeline."""

    def __init__(self, settings: Settings, rules: ToleranceRules = None):
        """Initialize the pipeline.

        Args:
            settings: Resolved run-time settings.
            rules: Numeric rules shared by every stage.
        """
        self.settings = settings
        self.rules = rules or ToleranceRules()
        self.stages = {
            "newton": NewtonStage(self.rules),
            "charts": ChartStage(self.rules),
            "critical": CriticalStage(self.rules),
            "witness": WitnessStage(self.rules),
            "verify": VerifyStage(self.rules),
        }
        self.workflow = self._build_workflow()
        self.last_state: Optional[PipelineState] = None

    def _build_workflow(self) -> StateGraph:
        """Build the LangGraph state machine.

        Returns:
            Compiled StateGraph workflow.
        """
        workflow = StateGraph(PipelineState)
        for name in STAGES:
            workflow.add_node(name, self.stages[name])

        workflow.set_entry_point("newton")
        for current, following in zip(STAGES, STAGES[1:]):
            workflow.add_conditional_edges(
                current,
                self._should_proceed,
                {
                    "proceed": following,
                    "stop": END
                }
            )
        workflow.add_edge("verify", END)
        return workflow.compile()

    def _should_proceed(self, state: PipelineState) -> str:
        """Stop on error, after the last stage the command needs, or when there are no bad faces."""
        if state.get("error"):
            return "stop"
        if LAST_STAGE[state["command"]] == state.get("current_stage"):
            return "stop"
        if not state.get("bad_faces"):
            return "stop"
        return "proceed"

    def run(self, spec: ProblemSpec, command: Command) -> RunReport:
        """Run a command on a problem.

        Args:
            spec: Parsed problem.
            command: Subcommand deciding the last stage.

        Returns:
            RunReport.
        """
        start_time = time.time()
        command = Command(command)
        initial_state = create_initial_state(
            spec,
            command,
            seed=self.settings.seed,
            precision=self.settings.precision,
            grid=self.settings.grid,
            nondegenerate=self.settings.nondegenerate_at_infinity,
            exhaustive_faces=self.settings.exhaustive_faces,
        )
        final_state = self.workflow.invoke(initial_state)
        self.last_state = final_state
        logger.info(f"{command.value} finished in {time.time() - start_time:.2f}s")
        with mp.workdps(self.settings.precision):
            return self._create_report(final_state)

    def witness_curves(self, state: Optional[PipelineState] = None) -> List[WitnessCurve]:
        """Synthesized witness curves of a finished run."""
        state = state or self.last_state or {}
        return [w["witness"] for w in state.get("witnesses", []) if w["witness"] is not None]

    def _create_report(self, state: PipelineState) -> RunReport:
        """Create the final report from state.

        Args:
            state: Final pipeline state.

        Returns:
            RunReport object.
        """
        spec = state["spec"]
        data = state.get("newton_data")
        f = state.get("polynomial")
        faces = state.get("bad_faces") or []

        face_reports = []
        for idx, face in enumerate(faces):
            face_reports.append(BadFaceReport(
                index=idx,
                dim=face.dim,
                k=face.k,
                vertices=[list(v) for v in face.vertices],
                normals=[list(v) for v in face.normals],
                face_polynomial=repr(face_polynomial(f, face)),
                relatively_simple=classify_relatively_simple(face, data.gamma_minus),
                dual_rays=[list(r) for r in dual_face_rays(face, data.gamma_minus)],
            ))

        chart_reports = []
        for idx, (chart, user) in enumerate(state.get("charts") or []):
            w, m = chart.as_lists()
            chart_reports.append(ChartReport(face_index=idx, W=w, M=m, positive=chart.positive, user_supplied=user))

        critical_reports = []
        for idx, points in sorted((state.get("critical_points") or {}).items()):
            for p in points:
                critical_reports.append(CriticalPointReport(
                    face_index=idx,
                    u_double_prime=[ComplexValue.of(v) for v in p.u_double_prime],
                    value=ComplexValue.of(p.value),
                    isolated=p.isolated,
                    residual=f"{p.residual:.3e}",
                ))

        candidates = state.get("candidates")
        candidate_reports, superset, independent = [], [], None
        if candidates is not None:
            candidate_reports = [CandidateReport(value=ComplexValue.of(c.value), faces=list(c.faces))
                                 for c in candidates.values]
            superset = [ComplexValue.of(v) for v in candidates.superset()]
            independent = candidates.chart_independent

        witness_reports = [self._witness_report(w) for w in state.get("witnesses") or []]

        exit_code = state.get("exit_code") or 0
        error, error_module = state.get("error"), state.get("error_module")
        if not exit_code:
            failed = next((w for w in witness_reports if w.exit_code), None)
            if failed is not None:
                exit_code, error, error_module = failed.exit_code, failed.error, failed.error_module

        command = state["command"]
        return RunReport(
            command=command,
            success=exit_code == 0,
            n=spec.n,
            seed=state["seed"],
            precision=state["precision"],
            bad_faces=face_reports,
            charts=chart_reports,
            critical_points=critical_reports,
            candidates=candidate_reports,
            candidate_superset=superset,
            chart_independent=independent,
            volume_bound=state.get("volume_bound"),
            witnesses=witness_reports,
            error=error,
            error_module=error_module,
            exit_code=exit_code,
        )

    def _witness_report(self, entry: Dict[str, Any]) -> WitnessReport:
        report = WitnessReport(
            face_index=entry["face_index"],
            target=ComplexValue.of(entry["target"]),
            error=entry["error"],
            error_module=entry["error_module"],
            exit_code=entry["exit_code"],
        )
        curve, facet = entry.get("curve"), entry.get("facet")
        if facet is not None:
            report.facet = FacetReport(
                q=list(facet.q),
                rho=facet.rho,
                L0=facet.L0,
                J=list(facet.J),
                leading_exponents=list(facet.exponents),
                deficits=list(facet.deficits),
                equation_count=facet.equation_count,
                parametric_length=facet.parametric_length,
                truncation=facet.truncation,
                facet_vertices=[list(v) for v in facet.facet_vertices],
            )
        if curve is not None:
            report.base_point = [ComplexValue.of(v) for v in curve.u_star]
            report.coefficients = [[ComplexValue.of(c) for c in row] for row in curve.coefficients]
            report.reduced_system = curve.reduced_system
            report.precision = entry.get("precision")
            report.residual = f"{curve.residual:.3e}"
        report.orders = [
            OrderReport(j=r.j, order=r.order, deficit=r.deficit, in_J=r.in_j, ok=r.ok) for r in entry.get("orders") or []
        ]
        v = entry.get("verification")
        if v is not None:
            report.verification = VerificationSummary(
                samples=len(v.t_grid),
                truncated=v.truncated,
                growth_slope=round(v.growth_slope, 6),
                decay_slope=round(v.decay_slope, 6),
                pair_slopes=[[round(s, 6) for s in row] for row in v.pair_slopes],
                limit=ComplexValue.of(v.limit_estimate),
                limit_error=f"{v.limit_error:.3e}",
                growth_ok=v.growth_ok,
                decay_ok=v.decay_ok,
                limit_ok=v.limit_ok,
                passed=v.passed,
            )
        return report


def run_pipeline(spec: ProblemSpec, command: Command, settings: Settings,
                 rules: Optional[ToleranceRules] = None) -> RunReport:
    """Convenience wrapper around ACVPipeline.run."""
    return ACVPipeline(settings, rules).run(spec, command)
