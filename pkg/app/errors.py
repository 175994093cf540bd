"""
Error hierarchy for the ACV pipeline.
Every error carries the tag of the module that raised it and the CLI exit code.
"""

from typing import Any, List, Optional


class ACVError(Exception):
    """Base class for all pipeline errors."""

    module = "acv"
    exit_code = 3

    def __init__(self, message: str, **diagnostics: Any):
        super().__init__(message)
        self.diagnostics = diagnostics

    def describe(self) -> str:
        return f"[{self.module}] {self.__class__.__name__}: {self}"


# =============================================================================
# exact-lattice
# =============================================================================

class NotExtendable(ACVError):
    module = "exact-lattice"


class NotUnimodular(ACVError):
    module = "exact-lattice"


# =============================================================================
# polyhedra
# =============================================================================

class DimensionTooLarge(ACVError):
    module = "polyhedra"


class PointsOffLattice(ACVError):
    module = "polyhedra"


# =============================================================================
# newton-analysis
# =============================================================================

class NotFullDimensional(ACVError):
    module = "newton-analysis"


# =============================================================================
# toric-chart
# =============================================================================

class ChartInvalid(ACVError):
    module = "toric-chart"


class NoPositiveCompletion(ACVError):
    module = "toric-chart"


class InconsistentDuality(ACVError):
    module = "toric-chart"


class SubdivisionBudgetExceeded(ACVError):
    module = "toric-chart"
    exit_code = 4


# =============================================================================
# laurent
# =============================================================================

class ExpansionPole(ACVError):
    module = "laurent"


# =============================================================================
# critical-points
# =============================================================================

class SolverBudgetExhausted(ACVError):
    module = "critical-points"
    exit_code = 4

    def __init__(self, message: str, partial: Optional[List[Any]] = None, **diagnostics: Any):
        super().__init__(message, **diagnostics)
        self.partial = partial or []


# =============================================================================
# curve-engine
# =============================================================================

class FacetUnstable(ACVError):
    module = "curve-engine"


class NoQualifyingFacet(ACVError):
    module = "curve-engine"


class MuViolated(ACVError):
    module = "curve-engine"


class Order0SolveFailed(ACVError):
    module = "curve-engine"
    exit_code = 4


class LinearSolveInconsistent(ACVError):
    module = "curve-engine"


# =============================================================================
# verifier
# =============================================================================

class OrderShortfall(ACVError):
    module = "verifier"


class NumericOverflow(ACVError):
    module = "verifier"


class VerificationFailed(ACVError):
    module = "verifier"


# =============================================================================
# cli-io
# =============================================================================

class ParseError(ACVError):
    module = "cli-io"
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}", line=line, field=field)
        self.line = line
        self.field = field


class ConstantTermPresent(ParseError):
    pass
