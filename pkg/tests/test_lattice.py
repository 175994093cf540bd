"""
Tests for exact lattice arithmetic and unimodular completion.
"""

from fractions import Fraction

import numpy as np
import pytest

from app.errors import NotExtendable, NotUnimodular
from app.lattice.integer import (
    determinant,
    dot,
    identity,
    lattice_coordinates,
    mat_mul,
    nullspace,
    primitive,
    rank,
    rational_inverse,
    rref,
    saturated_span,
    solve_rational,
)
from app.lattice.unimodular import invert_unimodular, is_saturated, is_unimodular, unimodular_complete


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 12):
    """Product of random elementary row operations and sign flips."""
    m = [list(row) for row in identity(n)]
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-3, 4))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.2:
            m[j] = [-a for a in m[j]]
    return tuple(tuple(row) for row in m)


class TestIntegerHelpers:
    """Test suite for exact integer helpers."""

    def test_determinant_known_matrices(self):
        """Test determinants of the reference charts."""
        assert determinant([[1, 0, 1], [-2, -1, -1], [2, 2, 1]]) in (1, -1)
        assert determinant([[0, 1, -1], [-1, 1, 0], [2, -3, 2]]) in (1, -1)
        assert determinant([[2, 0], [0, 3]]) == 6

    def test_rref_and_inverse_are_exact(self):
        """Test Fraction entries of the echelon form and of an exact inverse."""
        reduced, pivots = rref([(2, 4, 1), (1, 2, 0)])
        assert pivots == [0, 2]
        assert reduced[0] == [Fraction(1), Fraction(2), Fraction(0)]
        assert all(isinstance(x, Fraction) for row in reduced for x in row)
        w = [[1, 0, 1], [-2, -1, -1], [2, 2, 1]]
        inverse = rational_inverse(w)
        assert mat_mul(w, inverse) == identity(3)
        assert rational_inverse([[2, 0], [0, 4]]) == [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 4)]]
        with pytest.raises(ZeroDivisionError):
            rational_inverse([[1, 2], [2, 4]])

    def test_primitive_divides_content(self):
        """Test that primitive() divides by the gcd and keeps signs."""
        assert primitive((4, -6, 2)) == (2, -3, 1)
        assert primitive((0, 5)) == (0, 1)

    def test_rank_and_nullspace(self):
        """Test rank and integral nullspace of a rank-deficient matrix."""
        rows = [(1, 2, 3), (2, 4, 6)]
        assert rank(rows) == 1
        kernel = nullspace(rows, 3)
        assert len(kernel) == 2
        for v in kernel:
            assert dot(v, (1, 2, 3)) == 0

    def test_solve_rational_exact(self):
        """Test exact rational solve."""
        x = solve_rational([[2, 1], [1, 3]], [1, 2])
        assert x == [Fraction(1, 5), Fraction(3, 5)]

    def test_saturated_span_of_face_vertices(self):
        """Test lattice basis of the span of (2,2,1) and (1,2,1)."""
        basis = saturated_span([(2, 2, 1), (1, 2, 1)], 3)
        assert len(basis) == 2
        assert lattice_coordinates(basis, (2, 2, 1)) is not None
        assert lattice_coordinates(basis, (1, 0, 0)) is not None
        assert all(Fraction(c).denominator == 1 for c in lattice_coordinates(basis, (0, 2, 1)))


class TestUnimodular:
    """Test suite for unimodular completion and inversion."""

    def test_complete_single_primitive_vector(self):
        """Test completion of one primitive vector."""
        w = unimodular_complete([(2, 3)])
        assert w[0] == (2, 3)
        assert determinant(w) == 1

    def test_complete_keeps_leading_rows(self):
        """Test that the partial basis is kept as the leading rows."""
        partial = [(1, 2, 3, 1, 1), (0, 1, 0, 2, 1)]
        w = unimodular_complete(partial, 5)
        assert list(w[:2]) == partial
        assert determinant(w) == 1

    def test_random_primitive_vectors_complete(self):
        """Test completion of random primitive vectors in Z^4."""
        rng = np.random.default_rng(3)
        done = 0
        while done < 100:
            v = tuple(int(x) for x in rng.integers(-9, 10, size=4))
            if not any(v) or primitive(v) != v:
                continue
            assert abs(determinant(unimodular_complete([v]))) == 1
            done += 1

    def test_not_primitive_rejected(self):
        """Test NotExtendable for a non-primitive vector."""
        with pytest.raises(NotExtendable):
            unimodular_complete([(2, 0)])

    def test_unsaturated_pair_rejected(self):
        """Test NotExtendable for primitive vectors spanning an index-2 sublattice."""
        assert not is_saturated([(1, 1, 0), (1, -1, 0)])
        with pytest.raises(NotExtendable):
            unimodular_complete([(1, 1, 0), (1, -1, 0)])

    def test_inverse_of_reference_chart(self):
        """Test M = W^-1 for the ray-face chart."""
        m = invert_unimodular([[1, 0, 1], [-2, -1, -1], [2, 2, 1]])
        assert m == ((-1, -2, -1), (0, 1, 1), (2, 2, 1))

    def test_inverse_rejects_singular(self):
        """Test NotUnimodular for |det| != 1."""
        with pytest.raises(NotUnimodular):
            invert_unimodular([[2, 0], [0, 1]])
        assert not is_unimodular([[2, 0], [0, 1]])

    def test_random_unimodular_products(self):
        """Test W M = I exactly for 200 random unimodular matrices."""
        rng = np.random.default_rng(11)
        for trial in range(200):
            n = 2 + trial % 4
            w = random_unimodular(rng, n)
            m = invert_unimodular(w)
            assert mat_mul(w, m) == identity(n)
            assert mat_mul(m, w) == identity(n)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
