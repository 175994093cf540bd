"""
Tests for sparse Laurent polynomials, local jets and the mu-pairings.
"""

from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from app.errors import ExpansionPole, NotUnimodular
from app.laurent.jets import binomial, local_expand, mu_pair_jets, mu_pairings
from app.laurent.sparse import SparsePoly, log_gradient, substitute_monomial
from app.utils.numeric import loglog_slope, to_mp


def random_poly(rng: np.random.Generator, n: int, terms: int = 5, low: int = -2, high: int = 3) -> SparsePoly:
    poly = SparsePoly(n)
    for _ in range(terms):
        exp = tuple(int(x) for x in rng.integers(low, high, size=n))
        poly = poly + SparsePoly(n, {exp: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))})
    return poly


class TestSparsePoly:
    """Test suite for SparsePoly arithmetic."""

    def test_exact_rational_sum(self):
        """Test a/b + c/d is exact."""
        p = SparsePoly(1, {(1,): Fraction(1, 3)}) + SparsePoly(1, {(1,): Fraction(1, 6)})
        assert p.coefficient((1,)) == Fraction(1, 2)

    def test_cancellation_drops_terms(self):
        """Test that cancelled terms disappear."""
        x = SparsePoly.variable(2, 0)
        assert (x - x).is_zero()
        assert len((x + 1) * (x - 1)) == 2

    def test_power_and_negative_power(self):
        """Test (x + 1)^3 and monomial inverses."""
        x = SparsePoly.variable(1, 0)
        cube = (x + 1) ** 3
        assert [cube.coefficient((e,)) for e in range(4)] == [1, 3, 3, 1]
        inverse = SparsePoly.monomial((2,), Fraction(4)) ** -1
        assert inverse.coefficient((-2,)) == Fraction(1, 4)
        with pytest.raises(ValueError):
            (x + 1) ** -1

    def test_evaluate_and_derivative(self):
        """Test evaluation and partial derivatives."""
        f = SparsePoly(2, {(2, 1): Fraction(3), (0, -1): Fraction(1)})
        assert f.evaluate([Fraction(2), Fraction(1)]) == 13
        assert f.derivative(0) == SparsePoly(2, {(1, 1): Fraction(6)})
        assert f.derivative(1) == SparsePoly(2, {(2, 0): Fraction(3), (0, -2): Fraction(-1)})

    def test_project_and_embed(self):
        """Test that project and embed are inverse on the kept variables."""
        g = SparsePoly(3, {(0, 2, 1): Fraction(1), (0, 0, 3): Fraction(-1)})
        projected = g.project([1, 2])
        assert projected.n == 2
        assert projected.embed(3, [1, 2]) == g
        with pytest.raises(ValueError):
            SparsePoly(2, {(1, 1): Fraction(1)}).project([1])

    def test_log_gradient_leibniz(self):
        """Test theta(g h) = g theta h + h theta g on random Laurent polynomials."""
        rng = np.random.default_rng(41)
        for _ in range(10):
            g, h = random_poly(rng, 3), random_poly(rng, 3)
            left = log_gradient(g * h)
            right = [g * dh + h * dg for dg, dh in zip(log_gradient(g), log_gradient(h))]
            assert left == right

    def test_euler_identity(self):
        """Test sum w_i theta_i g = deg g for a weighted-homogeneous g."""
        weight = (1, 2, 3)
        g = SparsePoly(3, {(6, 0, 0): Fraction(1), (0, 3, 0): Fraction(-2), (1, 1, 1): Fraction(5), (0, 0, 2): Fraction(7)})
        theta = log_gradient(g)
        total = SparsePoly(3)
        for w, t in zip(weight, theta):
            total = total + t * w
        assert total == g * 6

    def test_substitute_monomial_rejects_singular(self):
        """Test NotUnimodular for a singular substitution."""
        with pytest.raises(NotUnimodular):
            substitute_monomial(SparsePoly.variable(2, 0), [[2, 0], [0, 1]])


class TestJets:
    """Test suite for local_expand and the mu-pairings."""

    def test_binomial_negative_exponent(self):
        """Test generalized binomial coefficients."""
        assert binomial(3, 2) == 3
        assert binomial(-1, 3) == -1
        assert binomial(-2, 2) == 3
        assert binomial(2, 3) == 0

    def test_ray_face_jet_terms(self, ray_face, ray_chart):
        """Test the expansion of u3^3 - 3 u3 at u3 = 1 has no linear U3 term."""
        f_w = ray_chart.transform(ray_face)
        jet = local_expand(f_w, ray_chart, [1], 6, (1, 1, 1))
        assert abs(jet.coefficient((0, 0, 0)) + 2) < 1e-40
        assert abs(jet.coefficient((0, 0, 1))) < 1e-40
        assert abs(jet.coefficient((0, 0, 2)) - 3) < 1e-40
        assert abs(jet.coefficient((0, 1, 0)) - 1) < 1e-40
        assert abs(jet.coefficient((3, 2, 0)) - 1) < 1e-40

    def test_jet_order_fit(self, planar_face, planar_chart):
        """Test |g(u* + delta) - jet(delta)| = O(|delta|^(order+1))."""
        f_w = planar_chart.transform(planar_face)
        base = [Fraction(-1, 3), Fraction(2, 3)]
        order = 3
        jet = local_expand(f_w, planar_chart, base, order, (1, 1, 1))
        direction = [mp.mpf("0.7"), mp.mpf("-0.4"), mp.mpf("0.9")]
        scales, errors = [], []
        for i in range(6):
            s = mp.mpf(10) ** (-2 - i / 2)
            delta = [s * d for d in direction]
            point = [delta[0], to_mp(base[0]) + delta[1], to_mp(base[1]) + delta[2]]
            exact = f_w.evaluate(point, convert=to_mp)
            scales.append(float(s))
            errors.append(float(abs(exact - jet.evaluate(delta))))
        assert loglog_slope(scales, errors) >= order + 0.9

    def test_expansion_pole(self, ray_chart):
        """Test ExpansionPole for a negative power of a chart axis."""
        g = SparsePoly(3, {(-1, 0, 1): Fraction(1)})
        with pytest.raises(ExpansionPole):
            local_expand(g, ray_chart, [1], 4, (1, 1, 1))

    def test_pairings_are_x_log_gradient(self, planar_face, planar_chart):
        """Test <mu_j, theta_u f^W> equals theta_{x_j} f written in u."""
        f_w = planar_chart.transform(planar_face)
        pairings = mu_pairings(planar_chart, f_w)
        direct = [planar_chart.transform(g) for g in log_gradient(planar_face)]
        assert pairings == direct

    def test_pair_jets_count(self, ray_face, ray_chart):
        """Test one jet per coordinate."""
        f_w = ray_chart.transform(ray_face)
        jets = mu_pair_jets(ray_chart, f_w, [1], 6, (1, 1, 1))
        assert len(jets) == 3
        assert all(jet.k == 2 for jet in jets)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
