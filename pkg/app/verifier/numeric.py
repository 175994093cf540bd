"""
Numeric evidence along a witness curve: growth of ||X(t)||, decay of the
products x_i df/dx_j and the limit of f(X(t)) as t -> 0.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp

from app.charts.chart import Chart
from app.curves.witness import WitnessCurve
from app.errors import NumericOverflow
from app.laurent.sparse import SparsePoly, log_gradient
from app.rules.tolerances import ToleranceRules
from app.utils.numeric import to_mp
from app.utils.settings import GridConfig

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """Samples, fitted slopes and pass flags of one witness curve."""
    t_grid: List = field(default_factory=list)
    norm_growth: List = field(default_factory=list)
    malgrange: List = field(default_factory=list)
    f_values: List = field(default_factory=list)
    growth_slope: float = 0.0
    decay_slope: float = 0.0
    pair_slopes: List[List[float]] = field(default_factory=list)
    limit_estimate: object = None
    limit_error: float = 0.0
    growth_ok: bool = False
    decay_ok: bool = False
    limit_ok: bool = False
    truncated: int = 0

    @property
    def passed(self) -> bool:
        return self.growth_ok and self.decay_ok and self.limit_ok


# =============================================================================
# Evaluators
# =============================================================================

def geometric_grid(grid: GridConfig) -> List:
    """Strictly decreasing samples from tmax to tmin."""
    tmax, tmin = mp.mpf(str(grid.tmax)), mp.mpf(str(grid.tmin))
    ratio = (tmin / tmax) ** (mp.mpf(1) / (grid.points - 1))
    return [tmax * ratio ** i for i in range(grid.points)]


def malgrange_matrix(f: SparsePoly, x: Sequence) -> List[List]:
    """The products x_i df/dx_j evaluated directly."""
    partials = [f.derivative(j).evaluate(x, convert=to_mp) for j in range(f.n)]
    return [[xi * d for d in partials] for xi in x]


def direct_log_gradient(f: SparsePoly, x: Sequence) -> List:
    return [g.evaluate(x, convert=to_mp) for g in log_gradient(f)]


def chart_log_gradient(f_w: SparsePoly, chart: Chart, u: Sequence) -> List:
    """theta_x f = M^T theta_u f^W evaluated at u."""
    theta_u = [g.evaluate(u, convert=to_mp) for g in log_gradient(f_w)]
    return [sum(chart.M[i][j] * theta_u[i] for i in range(chart.n)) for j in range(chart.n)]


def chart_point(chart: Chart, u: Sequence) -> List:
    """x = u^W."""
    point = []
    for i in range(chart.n):
        value = mp.mpf(1)
        for uj, e in zip(u, chart.w(i)):
            if e:
                value = value * uj ** e
        point.append(value)
    return point


def transform_identity_sides(f: SparsePoly, f_w: SparsePoly, chart: Chart, u: Sequence, ell: Sequence) -> Tuple[List, List]:
    """Both sides of <l, x> grad_x f = <l, u^W> (<mu_j, theta_u f^W> / u^{w_j})_j."""
    x = chart_point(chart, u)
    pairing = sum(to_mp(l) * xi for l, xi in zip(ell, x))
    left = [pairing * f.derivative(j).evaluate(x, convert=to_mp) for j in range(f.n)]
    theta_x = chart_log_gradient(f_w, chart, u)
    right = [pairing * theta_x[j] / x[j] for j in range(f.n)]
    return left, right


def _slope(xs: Sequence, ys: Sequence) -> float:
    """Least-squares slope of log|y| against log|x| computed from mpmath logarithms."""
    tiny = mp.mpf(10) ** (-(10 * mp.dps))
    lx = np.array([float(mp.log(abs(v))) for v in xs])
    ly = np.array([float(mp.log(max(abs(v), tiny))) for v in ys])
    return float(np.polyfit(lx, ly, 1)[0])


# =============================================================================
# Verification
# =============================================================================

def numeric_verify(
    f: SparsePoly,
    curve: WitnessCurve,
    target=None,
    grid: Optional[GridConfig] = None,
    rules: Optional[ToleranceRules] = None,
) -> VerificationReport:
    """Sample X(t) on a geometric grid and test growth, decay and the limit.

    Args:
        f: The polynomial.
        curve: Witness curve.
        target: Expected limit (defaults to the curve target).
        grid: Sampling grid (defaults from the rules).
        rules: Numeric rules.

    Returns:
        VerificationReport.

    Raises:
        NumericOverflow: If fewer than three samples survive.
    """
    rules = rules or ToleranceRules()
    grid = grid or GridConfig(tmin=rules.get("grid_tmin"), tmax=rules.get("grid_tmax"), points=rules.get("grid_points"))
    target = to_mp(target if target is not None else curve.target)
    ceiling = mp.mpf(10) ** (mp.dps - 10)
    report = VerificationReport()

    for t in geometric_grid(grid):
        x = curve.evaluate(t)
        if any(v == 0 for v in x):
            logger.debug(f"Grid truncated at t={float(t):.3e}: a coordinate vanishes")
            break
        largest = max(abs(to_mp(c)) * abs(mp.fprod(xi ** e for xi, e in zip(x, exp))) for exp, c in f.terms.items())
        if largest > ceiling or not all(mp.isfinite(v) for v in x):
            logger.debug(f"Grid truncated at t={float(t):.3e}: monomials exceed the working precision")
            break
        matrix = malgrange_matrix(f, x)
        report.t_grid.append(t)
        report.norm_growth.append(mp.sqrt(sum(abs(v) ** 2 for v in x)))
        report.malgrange.append(matrix)
        report.f_values.append(f.evaluate(x, convert=to_mp))
    report.truncated = grid.points - len(report.t_grid)
    if len(report.t_grid) < 3:
        raise NumericOverflow(f"Only {len(report.t_grid)} grid samples survive", truncated=report.truncated)

    window = min(rules.get("slope_window"), len(report.t_grid))
    ts = report.t_grid[-window:]
    norms = report.norm_growth[-window:]
    products = report.malgrange[-window:]
    report.growth_slope = _slope([1 / t for t in ts], norms)
    report.decay_slope = _slope(ts, [max(abs(v) for row in m for v in row) for m in products])
    n = len(products[0])
    report.pair_slopes = [[_slope(ts, [m[i][j] for m in products]) for j in range(n)] for i in range(n)]

    threshold = rules.get("slope_threshold")
    report.growth_ok = report.growth_slope >= threshold
    report.decay_ok = report.decay_slope >= threshold

    errors = [abs(v - target) for v in report.f_values]
    report.limit_estimate = report.f_values[-1]
    report.limit_error = float(errors[-1])
    tail = [e for t, e in zip(report.t_grid, errors) if t <= report.t_grid[-1] * 1000]
    decreasing = all(b <= a * (1 + mp.mpf(10) ** -6) + mp.mpf(10) ** (-(mp.dps - 10)) for a, b in zip(tail, tail[1:]))
    report.limit_ok = errors[-1] <= rules.get("limit_tol") * (1 + abs(target)) and decreasing

    logger.info(
        f"Numeric verification: growth slope {report.growth_slope:.3f}, decay slope {report.decay_slope:.3f}, "
        f"limit {mp.nstr(report.limit_estimate, 8)} (error {report.limit_error:.2e})"
    )
    return report


def emit_curve_samples(f: SparsePoly, curve: WitnessCurve, grid: GridConfig) -> str:
    """CSV with t, Re/Im x_i(t) and Re/Im f(X(t)); negative t rows are added for real curves."""
    header = ["t"] + [f"{part}_x{i + 1}" for i in range(curve.n) for part in ("re", "im")] + ["re_f", "im_f"]
    lines = [",".join(header)]
    ts = geometric_grid(grid)
    if curve.has_real_coefficients():
        ts = ts + [-t for t in ts]
    for t in ts:
        x = curve.evaluate(t)
        value = f.evaluate(x, convert=to_mp)
        cells = [mp.nstr(t, 12)]
        for v in x + [value]:
            v = mp.mpc(v)
            cells.extend([mp.nstr(v.real, 17), mp.nstr(v.imag, 17)])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
