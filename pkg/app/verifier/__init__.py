"""Symbolic and numeric verification of witness curves."""

from app.verifier.numeric import (
    VerificationReport,
    chart_log_gradient,
    direct_log_gradient,
    emit_curve_samples,
    transform_identity_sides,
    malgrange_matrix,
    numeric_verify,
)
from app.verifier.orders import OrderRow, symbolic_order_check

__all__ = [
    "OrderRow",
    "VerificationReport",
    "chart_log_gradient",
    "direct_log_gradient",
    "emit_curve_samples",
    "transform_identity_sides",
    "malgrange_matrix",
    "numeric_verify",
    "symbolic_order_check",
]
