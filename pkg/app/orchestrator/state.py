"""
State definitions for the ACV pipeline.
These TypedDicts and Pydantic models define the data flowing through the pipeline.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, TypedDict, Union

from mpmath import mp
from pydantic import BaseModel, Field

from app.laurent.sparse import SparsePoly
from app.utils.numeric import parse_scalar
from app.utils.settings import GridConfig

SCHEMA_VERSION = "1.0"


# =============================================================================
# Enums
# =============================================================================

class Command(str, Enum):
    BADFACES = "badfaces"
    BOUND = "bound"
    VALUES = "values"
    WITNESS = "witness"
    EMIT_CURVE = "emit-curve"


# Last stage each command needs
LAST_STAGE = {
    Command.BADFACES: "newton",
    Command.BOUND: "newton",
    Command.VALUES: "critical",
    Command.WITNESS: "verify",
    Command.EMIT_CURVE: "verify",
}


# =============================================================================
# Problem input
# =============================================================================

class Term(BaseModel):
    """One monomial with an exact rational coefficient."""
    coef: str = Field(description="Exact rational coefficient 'p' or 'p/q'")
    exp: List[int] = Field(description="Nonnegative exponent vector")


class ProblemSpec(BaseModel):
    """Validated problem file."""
    n: int = Field(ge=1, description="Number of variables")
    terms: List[Term] = Field(description="Monomials of f")
    charts: Optional[List[Optional[List[List[int]]]]] = Field(None, description="User W per bad face")
    u_star: Optional[List[str]] = Field(None, description="Override of u''* for the first bad face")
    nondegenerate_at_infinity: bool = Field(False, description="User-asserted non-degeneracy flag")
    seed: Optional[int] = Field(None, description="Seed of every random generator")
    grid: Optional[GridConfig] = Field(None, description="Verification grid")

    def polynomial(self) -> SparsePoly:
        poly = SparsePoly(self.n)
        for term in self.terms:
            poly = poly + SparsePoly(self.n, {tuple(term.exp): Fraction(term.coef)})
        return poly

    def user_chart(self, face_index: int) -> Optional[List[List[int]]]:
        if not self.charts or face_index >= len(self.charts):
            return None
        return self.charts[face_index]

    def base_point_override(self) -> Optional[List[Union[Fraction, complex]]]:
        if not self.u_star:
            return None
        return [parse_scalar(v) for v in self.u_star]


# =============================================================================
# Report models
# =============================================================================

class ComplexValue(BaseModel):
    """Complex number as 20-digit strings."""
    re: str
    im: str

    @classmethod
    def of(cls, value) -> "ComplexValue":
        value = mp.mpc(value)
        return cls(re=mp.nstr(value.real, 20), im=mp.nstr(value.imag, 20))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


class BadFaceReport(BaseModel):
    index: int
    dim: int
    k: int = Field(description="Codimension n - dim")
    vertices: List[List[int]]
    normals: List[List[int]]
    face_polynomial: str
    relatively_simple: bool
    dual_rays: List[List[int]]


class ChartReport(BaseModel):
    face_index: int
    W: List[List[int]]
    M: List[List[int]]
    positive: bool = Field(description="Rows m_{k+1..n} of M strictly positive")
    user_supplied: bool = False


class CriticalPointReport(BaseModel):
    face_index: int
    u_double_prime: List[ComplexValue]
    value: ComplexValue
    isolated: bool
    residual: str


class CandidateReport(BaseModel):
    value: ComplexValue
    faces: List[int]


class FacetReport(BaseModel):
    q: List[int]
    rho: int
    L0: int
    J: List[int]
    leading_exponents: List[int]
    deficits: List[int]
    equation_count: int
    parametric_length: int
    truncation: int
    facet_vertices: List[List[int]]


class OrderReport(BaseModel):
    j: int
    order: int
    deficit: int
    in_J: bool
    ok: bool


class VerificationSummary(BaseModel):
    samples: int
    truncated: int
    growth_slope: float
    decay_slope: float
    pair_slopes: List[List[float]]
    limit: ComplexValue
    limit_error: str
    growth_ok: bool
    decay_ok: bool
    limit_ok: bool
    passed: bool


class WitnessReport(BaseModel):
    face_index: int
    target: ComplexValue
    base_point: List[ComplexValue] = Field(default_factory=list)
    facet: Optional[FacetReport] = None
    coefficients: List[List[ComplexValue]] = Field(default_factory=list)
    reduced_system: bool = False
    precision: Optional[int] = Field(None, description="Digits at which the curve was built and checked")
    residual: Optional[str] = None
    orders: List[OrderReport] = Field(default_factory=list)
    verification: Optional[VerificationSummary] = None
    error: Optional[str] = None
    error_module: Optional[str] = None
    exit_code: int = 0


class RunReport(BaseModel):
    """Final output returned to the user."""
    schema_version: str = SCHEMA_VERSION
    command: Command
    success: bool
    n: int
    seed: int
    precision: int
    bad_faces: List[BadFaceReport] = Field(default_factory=list)
    charts: List[ChartReport] = Field(default_factory=list)
    critical_points: List[CriticalPointReport] = Field(default_factory=list)
    candidates: List[CandidateReport] = Field(default_factory=list)
    candidate_superset: List[ComplexValue] = Field(default_factory=list)
    chart_independent: Optional[bool] = None
    volume_bound: Optional[int] = None
    witnesses: List[WitnessReport] = Field(default_factory=list)
    error: Optional[str] = None
    error_module: Optional[str] = None
    exit_code: int = 0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


# =============================================================================
# LangGraph State (TypedDict for graph state)
# =============================================================================

class PipelineState(TypedDict):
    """
    Main state object that flows through the LangGraph pipeline.
    Each stage reads from and writes to this state.
    """
    # Input
    spec: ProblemSpec
    command: Command
    seed: int
    precision: int
    grid: GridConfig
    nondegenerate: bool
    exhaustive_faces: bool

    # Stage 1: Newton analysis
    polynomial: Optional[SparsePoly]
    newton_data: Optional[Any]
    bad_faces: List[Any]
    volume_bound: Optional[int]

    # Stage 2: Charts
    charts: List[Any]

    # Stage 3: Critical points
    critical_points: Dict[int, List[Any]]
    candidates: Optional[Any]

    # Stage 4/5: Witness curves and verification
    witnesses: List[Dict[str, Any]]

    # Pipeline metadata
    current_stage: str
    error: Optional[str]
    error_module: Optional[str]
    exit_code: int
    completed: bool


# =============================================================================
# Helper Functions
# =============================================================================

def create_initial_state(
    spec: ProblemSpec,
    command: Command,
    seed: int,
    precision: int,
    grid: GridConfig,
    nondegenerate: bool = False,
    exhaustive_faces: bool = False,
) -> PipelineState:
    """Create initial state for a new run."""
    return PipelineState(
        spec=spec,
        command=command,
        seed=seed,
        precision=precision,
        grid=grid,
        nondegenerate=nondegenerate,
        exhaustive_faces=exhaustive_faces,
        polynomial=None,
        newton_data=None,
        bad_faces=[],
        volume_bound=None,
        charts=[],
        critical_points={},
        candidates=None,
        witnesses=[],
        current_stage="",
        error=None,
        error_module=None,
        exit_code=0,
        completed=False,
    )
