"""
Tests for the numeric verifier and the order check.
"""

from fractions import Fraction

import pytest
from mpmath import mp

from app.critical.candidates import face_polynomial_in_chart
from app.critical.solver import face_critical_points
from app.curves.synthesis import synthesize_for_point
from app.curves.witness import witness_from_components
from app.errors import NumericOverflow
from app.newton.analysis import maximal_bad_faces, newton_data
from app.utils.numeric import to_mp
from app.utils.settings import GridConfig
from app.verifier.numeric import geometric_grid, emit_curve_samples, numeric_verify, transform_identity_sides
from app.verifier.orders import symbolic_order_check

F = Fraction


@pytest.fixture
def ray_explicit_curve():
    """x1 = P R, x2 = 1 / (P^2 R S), x3 = P^2 R S^2, so that x^(2,2,1) = R."""
    p = {2: 1, 1: 1, 0: 1, -1: 1}
    r = {6: F(1), 5: F(-8, 3), 4: F(-1), 3: F(-1, 3), 0: F(1)}
    s = {6: 1, 5: 1, 4: 1, 3: 1}
    return witness_from_components(
        [
            [(p, 1), (r, 1)],
            [(p, -2), (r, -1), (s, -1)],
            [(p, 2), (r, 1), (s, 2)],
        ],
        target=-2,
    )


@pytest.fixture
def planar_explicit_curve():
    """x1 = A / B, x2 = A / C, x3 = B^2 C^2 / A^3."""
    a = {4: F(1), 3: F(1), 2: F(1), 1: F(1), 0: F(-1, 3)}
    b = {4: F(1), 3: F(131, 256), 2: F(-1, 4), 1: F(3, 4), 0: F(2, 3)}
    c = {4: 1, 3: 1, 2: 1, 1: 1}
    return witness_from_components(
        [
            [(a, 1), (b, -1)],
            [(a, 1), (c, -1)],
            [(b, 2), (c, 2), (a, -3)],
        ],
        target=-2,
    )


class TestNumericVerify:
    """Test suite for numeric_verify."""

    def test_ray_face_explicit_curve(self, ray_face, ray_explicit_curve, rules):
        """Test growth, decay and the limit -2 along the explicit curve."""
        x = ray_explicit_curve.evaluate(mp.mpf("0.01"))
        x_v0 = x[0] ** 2 * x[1] ** 2 * x[2]
        t = mp.mpf("0.01")
        assert abs(x_v0 - (t ** 6 - 8 * t ** 5 / 3 - t ** 4 - t ** 3 / 3 + 1)) < mp.mpf(10) ** -40

        report = numeric_verify(ray_face, ray_explicit_curve, rules=rules)
        assert report.growth_ok
        assert report.growth_slope == pytest.approx(1.0, abs=0.1)
        assert report.decay_ok
        assert report.limit_ok
        assert report.passed
        assert report.limit_error < 1e-12
        assert report.truncated == 0

    def test_planar_explicit_curve(self, planar_face, planar_explicit_curve, rules):
        """Test growth and the limit -2 along the explicit planar curve, and its failed decay.

        The curve solves the order-0 equation of G_3 but not that of G_1, whose
        t^1 coefficient is -1/6, so x_2 df/dx_1 = (B / C) G_1 tends to -1/9.
        """
        report = numeric_verify(planar_face, planar_explicit_curve, rules=rules)
        assert report.growth_ok
        assert report.limit_ok
        assert abs(complex(report.limit_estimate) + 2) < 1e-4
        assert not report.decay_ok
        assert not report.passed
        assert report.pair_slopes[1][0] == pytest.approx(0.0, abs=0.1)
        assert abs(complex(report.malgrange[-1][1][0]) + 1 / 9) < 1e-4

    def test_constant_curve_fails(self, ray_face, rules):
        """Test that a bounded curve fails the growth condition."""
        curve = witness_from_components([[({0: 1}, 1)]] * 3, target=-2)
        report = numeric_verify(ray_face, curve, rules=rules)
        assert not report.growth_ok
        assert not report.limit_ok
        assert not report.passed

    def test_wrong_target_fails_limit(self, ray_face, ray_explicit_curve, rules):
        """Test the limit check against the other candidate value."""
        report = numeric_verify(ray_face, ray_explicit_curve, target=2, rules=rules)
        assert report.growth_ok
        assert not report.limit_ok

    def test_overflow(self, ray_face, rules):
        """Test NumericOverflow when every sample exceeds the working precision."""
        curve = witness_from_components([[({-200: 1}, 1)]] * 3, target=0)
        with pytest.raises(NumericOverflow):
            numeric_verify(ray_face, curve, rules=rules)


class TestGridAndSamples:
    """Test suite for the sampling grid and curve samples."""

    def test_geometric_grid(self):
        """Test endpoints and strict decrease."""
        ts = geometric_grid(GridConfig(tmin=1e-6, tmax=1e-1, points=6))
        assert len(ts) == 6
        assert abs(ts[0] - mp.mpf("0.1")) < 1e-40
        assert abs(ts[-1] - mp.mpf("1e-6")) < 1e-40
        assert all(b < a for a, b in zip(ts, ts[1:]))

    def test_emit_curve_samples(self, ray_face, ray_explicit_curve):
        """Test the CSV layout and the value at t = 0.1."""
        text = emit_curve_samples(ray_face, ray_explicit_curve, GridConfig(tmin=0.01, tmax=0.1, points=2))
        lines = text.strip().split("\n")
        header = lines[0].split(",")
        assert header == ["t", "re_x1", "im_x1", "re_x2", "im_x2", "re_x3", "im_x3", "re_f", "im_f"]
        assert len(lines) == 5
        first = lines[1].split(",")
        expected = ray_face.evaluate(ray_explicit_curve.evaluate(mp.mpf("0.1")), convert=to_mp)
        assert float(first[0]) == pytest.approx(0.1)
        assert float(first[7]) == pytest.approx(float(mp.re(expected)), rel=1e-12)
        assert float(lines[3].split(",")[0]) == pytest.approx(-0.1)


class TestIdentities:
    """Test suite for the chart identities used by the verifier."""

    def test_transform_identity_sides(self, ray_face, ray_chart):
        """Test both sides agree at a torus point."""
        f_w = ray_chart.transform(ray_face)
        u = [mp.mpc("0.7", "0.2"), mp.mpc("-1.3", "0.5"), mp.mpc("0.9", "-0.4")]
        left, right = transform_identity_sides(ray_face, f_w, ray_chart, u, [1, 2, 3])
        assert all(abs(a - b) <= 1e-40 * max(1, abs(a)) for a, b in zip(left, right))


class TestOrderCheck:
    """Test suite for symbolic_order_check."""

    def test_ray_face_orders(self, ray_face, ray_chart, rules):
        """Test ord G_j(Q(t)) > D_j for the synthesized ray-face curve."""
        f_w = ray_chart.transform(ray_face)
        face = maximal_bad_faces(newton_data(ray_face))[0]
        g = face_polynomial_in_chart(ray_face, face, ray_chart)
        point = face_critical_points(g, rules)[0]
        curve, facet = synthesize_for_point(ray_chart, f_w, g, point, rules, seed=0)
        rows = symbolic_order_check(curve, facet, f_w)
        assert [row.j for row in rows] == [1, 2, 3]
        assert all(row.ok for row in rows)
        third = rows[2]
        assert third.in_j
        assert third.deficit == 5
        assert third.order >= 6

    def test_requires_pairings_or_polynomial(self, ray_face, ray_chart, rules):
        """Test ValueError without f_w or pairings."""
        f_w = ray_chart.transform(ray_face)
        face = maximal_bad_faces(newton_data(ray_face))[0]
        g = face_polynomial_in_chart(ray_face, face, ray_chart)
        point = face_critical_points(g, rules)[0]
        curve, facet = synthesize_for_point(ray_chart, f_w, g, point, rules, seed=0)
        with pytest.raises(ValueError):
            symbolic_order_check(curve, facet)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
