"""
Numeric Rules
Thresholds and budgets shared by the numeric stages of the pipeline.
"""

from typing import Any, Dict, Optional


NUMERIC_RULES = {
    "working_precision": {
        "value": 100,  # decimal digits for mpmath polishing and verification
        "description": "Working precision of high-precision numerics",
    },
    "torus_eps": {
        "value": 1e-9,
        "description": "Coordinates closer to 0 are treated as off-torus",
    },
    "dedup_tol": {
        "value": 1e-8,
        "description": "Relative tolerance for merging points and values",
    },
    "newton_starts": {
        "value": 64,
        "description": "Multistart count for torus critical points",
    },
    "newton_rounds": {
        "value": 3,
        "description": "Multistart rounds; a round that still finds new values means the search is incomplete",
    },
    "newton_iterations": {
        "value": 200,
        "description": "Damped Newton iteration budget per start",
    },
    "start_modulus": {
        "value": (0.1, 10.0),  # log-uniform moduli
        "description": "Modulus range of random complex starting points",
    },
    "residual_tol": {
        "value": 1e-10,
        "description": "Residual accepted by the double-precision solvers",
    },
    "relative_residual_tol": {
        "value": 1e-6,
        "description": "Residual of theta g relative to the size of its terms; rejects points where the terms vanish",
    },
    "max_precision": {
        "value": 400,
        "description": "Precision cap in decimal digits when a verification is retried at doubled precision",
    },
    "nonisolated_min_points": {
        "value": 5,
        "description": "Distinct points sharing a value that mark a positive-dimensional locus",
    },
    "rank_tol": {
        "value": 1e-10,
        "description": "Relative singular value cutoff for numerical rank decisions",
    },
    "order0_starts": {
        "value": 24,
        "description": "Random starts per pinning pattern for the order-0 curve system",
    },
    "order0_iterations": {
        "value": 80,
        "description": "Gauss-Newton iterations per order-0 start",
    },
    "refine_rounds": {
        "value": 2,
        "description": "Joint (c(0), u'') refinements of a base point on a non-isolated critical locus",
    },
    "genericity_floor": {
        "value": 1e-6,
        "description": "Minimal modulus of every leading curve coefficient",
    },
    "facet_truncation": {
        "value": 6,
        "description": "Initial U-degree of jets used to build the facet polytope",
    },
    "facet_deepening": {
        "value": 4,
        "description": "Extra truncation used to confirm facet stability",
    },
    "facet_rounds": {
        "value": 4,
        "description": "Deepening rounds before giving up on facet stability",
    },
    "subdivision_budget": {
        "value": 500,
        "description": "Star subdivisions allowed per cone",
    },
    "completion_search_bound": {
        "value": 3,
        "description": "Coefficient bound of the positive basis search",
    },
    "grid_tmin": {
        "value": 1e-7,
        "description": "Smallest sampled curve parameter",
    },
    "grid_tmax": {
        "value": 1e-1,
        "description": "Largest sampled curve parameter",
    },
    "grid_points": {
        "value": 25,
        "description": "Number of geometric grid samples",
    },
    "slope_window": {
        "value": 12,
        "description": "Trailing samples used for log-log slope fits",
    },
    "slope_threshold": {
        "value": 0.9,
        "description": "Minimal fitted slope for conditions (I) and (II)",
    },
    "limit_tol": {
        "value": 1e-4,
        "description": "Relative tolerance of the limit check",
    },
}


class ToleranceRules:
    """Lookup of numeric rules with optional overrides."""

    def __init__(self, rules: dict = None, overrides: Optional[Dict[str, Any]] = None):
        """Initialize with custom or default rules.

        Args:
            rules: Optional custom rules dictionary.
            overrides: Optional mapping of rule name to replacement value.
        """
        self.rules = rules or NUMERIC_RULES
        self.overrides = dict(overrides or {})

    def get(self, name: str) -> Any:
        if name in self.overrides:
            return self.overrides[name]
        if name not in self.rules:
            raise KeyError(f"Unknown numeric rule: {name}")
        return self.rules[name]["value"]

    def describe(self, name: str) -> str:
        return self.rules[name]["description"]

    def as_dict(self) -> Dict[str, Any]:
        return {name: self.get(name) for name in self.rules}
