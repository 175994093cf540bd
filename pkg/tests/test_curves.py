"""
Tests for facet data, curve synthesis and witness curves.
"""

from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from app.charts.chart import Chart
from app.critical.candidates import face_polynomial_in_chart
from app.critical.solver import face_critical_points
from app.curves.facet import FacetData, build_delta_star_and_facet, compute_L0_J
from app.curves.series import TSeries, substitute
from app.curves.synthesis import LeadingSystem, locate_facet, solve_order0, synthesize_curve, synthesize_for_point
from app.curves.witness import push_to_x
from app.errors import MuViolated
from app.laurent.jets import mu_pair_jets, mu_pairings
from app.laurent.sparse import SparsePoly
from app.lattice.integer import identity
from app.newton.analysis import maximal_bad_faces, newton_data
from app.utils.numeric import to_mp


def critical_point(f, chart, rules, index=0):
    face = maximal_bad_faces(newton_data(f))[0]
    g = face_polynomial_in_chart(f, face, chart)
    return g, face_critical_points(g, rules)[index]


class TestTSeries:
    """Test suite for truncated Laurent series."""

    def test_inverse_geometric(self):
        """Test 1 / (1 - t) = 1 + t + t^2 + ..."""
        inverse = TSeries(0, [1, -1, 0, 0, 0]).inverse()
        assert inverse.coeffs == [1, 1, 1, 1, 1]

    def test_inverse_shifts_start(self):
        """Test 1 / (2 t^3) starts at t^-3."""
        inverse = TSeries(3, [Fraction(2), 0]).inverse()
        assert inverse.start == -3
        assert inverse.coefficient(-3) == Fraction(1, 2)

    def test_precision_beyond_raises(self):
        """Test that coefficients beyond the precision are refused."""
        with pytest.raises(ValueError):
            TSeries(0, [1, 2]).coefficient(2)

    def test_substitute_matches_product(self):
        """Test x^2 y with x = t^-1 (1 + t), y = t^3 (2 + t)."""
        poly = SparsePoly(2, {(2, 1): Fraction(1)})
        x = TSeries(-1, [1, 1, 0, 0])
        y = TSeries(3, [2, 1, 0, 0])
        series = substitute(poly, [x, y], 4)
        assert series.start == 1
        assert [series.coefficient(e) for e in range(1, 4)] == [2, 5, 4]


class TestFacetData:
    """Test suite for L0, J and the derived counts."""

    def test_ray_face_exponents(self, ray_chart):
        """Test e = (-1,-1,4), L0 = 5 and J = {3}."""
        l0, j_set, e, deficits = compute_L0_J((-1, 3, 3), ray_chart)
        assert e == (-1, -1, 4)
        assert l0 == 5
        assert j_set == (3,)
        assert deficits == (0, 0, 5)

    def test_planar_face_exponents(self, planar_chart):
        """Test e = (0,-1,2), L0 = 3 and J = {1, 3}."""
        l0, j_set, e, _ = compute_L0_J((1, 1, 1), planar_chart)
        assert e == (0, -1, 2)
        assert (l0, j_set) == (3, (1, 3))

    def test_five_variable_exponents(self, five_variable_chart):
        """Test e = (-1,0,-2,8,-1), L0 = 10 and J = {1,2,4,5}."""
        l0, j_set, e, deficits = compute_L0_J((5, -20, 3, 15, 5), five_variable_chart)
        assert e == (-1, 0, -2, 8, -1)
        assert l0 == 10
        assert j_set == (1, 2, 4, 5)
        assert deficits == (1, 2, -1, 10, 1)

    def test_root_family_exponents(self, root_chart):
        """Test e = (-2,-2,8), L0 = 10 and J = {3}."""
        l0, j_set, e, _ = compute_L0_J((2, 2, 3), root_chart)
        assert e == (-2, -2, 8)
        assert (l0, j_set) == (10, (3,))

    def test_mu_violated(self):
        """Test MuViolated when every leading exponent is nonnegative."""
        chart = Chart.from_matrix(identity(3), 2)
        with pytest.raises(MuViolated):
            compute_L0_J((1, 2, 1), chart)

    @pytest.mark.parametrize("rho,l0,j_set,count,length", [
        (3, 5, (3,), 3, 4),
        (5, 10, (1, 2, 4, 5), 24, 7),
        (6, 10, (3,), 5, 6),
        (1, 3, (1, 3), 6, 4),
    ])
    def test_counts(self, rho, l0, j_set, count, length):
        """Test (L0 + 1 - rho) |J| equations and parametric length L0 - rho + 2."""
        facet = FacetData(q=(1,), rho=rho, L0=l0, J=j_set)
        assert facet.equation_count == count
        assert facet.parametric_length == length


class TestFacetSearch:
    """Test suite for the facet of the jet polyhedron."""

    def test_ray_face_facet(self, ray_face, ray_chart):
        """Test q = (-1,3,3), rho = 3 on the plane through (3,2,0), (0,1,0), (0,0,1)."""
        f_w = ray_chart.transform(ray_face)
        jets = mu_pair_jets(ray_chart, f_w, [1], 6, (0, 0, 1))
        facet = build_delta_star_and_facet(jets, 2)
        assert facet.q == (-1, 3, 3)
        assert facet.rho == 3
        assert set(facet.facet_vertices) == {(3, 2, 0), (0, 1, 0), (0, 0, 1)}

    def test_root_family_facet(self, root_family, root_chart, rules):
        """Test q = (2,2,3), rho = 6 at the degenerate critical point u3 = 1."""
        f_w = root_chart.transform(root_family)
        facet = locate_facet(root_chart, mu_pairings(root_chart, f_w), [1], rules)
        assert facet.q == (2, 2, 3)
        assert facet.rho == 6
        assert facet.J == (3,)
        assert facet.parametric_length == 6

    def test_planar_face_facet(self, planar_face, planar_chart, rules):
        """Test q = (1,1,1), rho = 1 at (u2, u3) = (-1/3, 2/3)."""
        f_w = planar_chart.transform(planar_face)
        base = [Fraction(-1, 3), Fraction(2, 3)]
        facet = locate_facet(planar_chart, mu_pairings(planar_chart, f_w), base, rules)
        assert facet.q == (1, 1, 1)
        assert facet.rho == 1
        assert (facet.L0, facet.J) == (3, (1, 3))
        assert facet.equation_count == 6


class TestSynthesis:
    """Test suite for curve synthesis."""

    def test_ray_face_curve(self, ray_face, ray_chart, rules):
        """Test a length-4 curve whose image tends to the value -2."""
        f_w = ray_chart.transform(ray_face)
        g, point = critical_point(ray_face, ray_chart, rules)
        curve, facet = synthesize_for_point(ray_chart, f_w, g, point, rules, seed=0)
        assert facet.equation_count == 3
        assert curve.length == 4
        assert all(abs(c) > rules.get("genericity_floor") for c in curve.coefficients[0])
        assert all(c == 1 for c in curve.coefficients[-1])
        assert curve.residual < 1e-9
        assert not curve.reduced_system

        witness = push_to_x(curve, ray_chart, target=point.value)
        assert witness.leading_exponents == (-1, -1, 4)
        x = witness.evaluate(mp.mpf("1e-2"))
        assert abs(ray_face.evaluate(x, convert=to_mp) + 2) < 1e-3

    def test_root_family_curve(self, root_family, root_chart, rules):
        """Test length 6 at the critical point with value -2."""
        f_w = root_chart.transform(root_family)
        g, point = critical_point(root_family, root_chart, rules, index=1)
        assert abs(point.complex_value + 2) < 1e-12
        curve, facet = synthesize_for_point(root_chart, f_w, g, point, rules, seed=0)
        assert facet.equation_count == 5
        assert curve.length == 6

    def test_five_variable_curve(self, five_variable, five_variable_chart, rules):
        """Test 24 equations and length 7 at u5 = 1.

        The order-rho equations of G_1, G_2, G_4, G_5 force c_2(0)^2 c_4(0)^3 = 0, so only
        G_4 (the one index with D_j >= rho) keeps its order-0 requirement.
        """
        f_w = five_variable_chart.transform(five_variable)
        g, point = critical_point(five_variable, five_variable_chart, rules)
        assert abs(point.complex_value + 2) < 1e-12
        curve, facet = synthesize_for_point(five_variable_chart, f_w, g, point, rules, seed=0)
        assert facet.q == (5, -20, 3, 15, 5)
        assert facet.rho == 5
        assert facet.equation_count == 24
        assert curve.length == 7
        assert curve.reduced_system
        assert curve.residual < 1e-9
        assert all(abs(c) > rules.get("genericity_floor") for c in curve.coefficients[0])

    def test_planar_order0_equation(self, planar_face, planar_chart):
        """Test the order-0 equation of G_3 at (-1/3, 2/3): c1/2 - 2 c2 + 2 c3 up to scaling."""
        f_w = planar_chart.transform(planar_face)
        system = LeadingSystem(mu_pairings(planar_chart, f_w), [2], (1, 1, 1), 1, 1)
        base = [mp.mpf(-1) / 3, mp.mpf(2) / 3]
        row = system.jacobian([mp.mpf(1)] * 3, base, to_mp)[0]
        assert abs(row[0]) > 1e-10
        assert abs(row[1] / row[0] + 4) < 1e-30
        assert abs(row[2] / row[0] - 4) < 1e-30

    def test_planar_order0_unsolvable_at_representative(self, planar_face, planar_chart, rules):
        """Test that G_1 and G_3 together force c1(0) = 0 at (-1/3, 2/3)."""
        f_w = planar_chart.transform(planar_face)
        system = LeadingSystem(mu_pairings(planar_chart, f_w), [0, 2], (1, 1, 1), 1, 1)
        base = [mp.mpf(-1) / 3, mp.mpf(2) / 3]
        assert solve_order0(system, base, rules, np.random.default_rng(0)) is None

    def test_planar_curve_refines_base_point(self, planar_face, planar_chart, rules):
        """Test the refined base point u2 = a, u3 = a + 1 with 2a^2 + 4a + 1 = 0."""
        f_w = planar_chart.transform(planar_face)
        g, point = critical_point(planar_face, planar_chart, rules)
        assert abs(point.complex_value + 2) < 1e-12
        assert not point.isolated
        curve, facet = synthesize_for_point(planar_chart, f_w, g, point, rules, seed=0)
        assert facet.q == (1, 1, 1)
        assert (facet.rho, facet.L0, facet.J) == (1, 3, (1, 3))
        assert curve.length == 4
        a, b = curve.u_star[1], curve.u_star[2]
        assert abs(2 * a ** 2 + 4 * a + 1) < 1e-30
        assert abs(b - a - 1) < 1e-30
        assert abs(g.evaluate([a, b], convert=to_mp) + 2) < 1e-30
        assert all(abs(c) > rules.get("genericity_floor") for c in curve.coefficients[0])

    def test_empty_index_set(self, ray_face, ray_chart, rules):
        """Test an all-ones leading order when J is empty."""
        f_w = ray_chart.transform(ray_face)
        facet = FacetData(q=(-1, 3, 3), rho=3, L0=5, J=())
        curve = synthesize_curve(ray_chart, f_w, [1], facet, rules)
        assert curve.length == 4
        assert all(c == 1 for c in curve.coefficients[0])
        assert all(c == 0 for row in curve.coefficients[1:] for c in row)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
