"""
Numeric tolerance rules for the ACV pipeline.
"""

from .tolerances import NUMERIC_RULES, ToleranceRules

__all__ = ["NUMERIC_RULES", "ToleranceRules"]
