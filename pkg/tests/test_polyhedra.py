"""
Tests for exact hulls, cones, lattice volumes and unimodular subdivision.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from app.charts.subdivision import covering_cone, multiplicity, unimodular_subdivide
from app.errors import DimensionTooLarge, SubdivisionBudgetExceeded
from app.lattice.integer import determinant, dot, identity
from app.polyhedra.cones import ConeRep, contains, dual_cone, extreme_rays, same_cone
from app.polyhedra.hull import convex_hull, faces, triangulate
from app.polyhedra.volume import lattice_volume, simplex_volume
from app.rules.tolerances import ToleranceRules


def shoelace_twice_area(points) -> Fraction:
    """Twice the Euclidean area of a convex polygon given by its vertices in any order."""
    cx = sum(Fraction(p[0]) for p in points) / len(points)
    cy = sum(Fraction(p[1]) for p in points) / len(points)
    ordered = sorted(points, key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))
    total = Fraction(0)
    for (x1, y1), (x2, y2) in zip(ordered, ordered[1:] + ordered[:1]):
        total += Fraction(x1) * y2 - Fraction(x2) * y1
    return abs(total)


class TestConvexHull:
    """Test suite for convex_hull and faces."""

    def test_square_with_interior_point(self):
        """Test that interior points are not vertices."""
        hull = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)])
        assert hull.intrinsic_dim == 2
        assert len(hull.vertices) == 4
        assert len(hull.facets) == 4
        assert hull.contains((1, 1))
        assert not hull.contains((3, 1))

    def test_simplex_face_counts(self):
        """Test (n+1 choose k+1) k-faces of the standard 3-simplex."""
        simplex = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        for k in range(3):
            assert len(faces(simplex, k)) == math.comb(4, k + 1)

    def test_lower_dimensional_hull(self):
        """Test a segment in R^3 keeps its affine equations."""
        segment = convex_hull([(2, 2, 1), (4, 4, 2), (6, 6, 3)])
        assert segment.intrinsic_dim == 1
        assert len(segment.vertices) == 2
        assert segment.contains((4, 4, 2))
        assert not segment.contains((4, 4, 3))

    def test_face_normals_attain_minimum_on_face(self):
        """Test that face normals attain their minimum exactly on the face."""
        cube = convex_hull([p for p in np.ndindex(2, 2, 2)])
        for edge in faces(cube, 1):
            values = [dot(edge.normal, v) for v in cube.vertices]
            on = [i for i, v in enumerate(values) if v == min(values)]
            assert tuple(on) == edge.vertex_subset

    def test_dimension_bound(self):
        """Test DimensionTooLarge above the supported ambient dimension."""
        with pytest.raises(DimensionTooLarge):
            convex_hull([tuple([0] * 7), tuple([1] * 7)])

    def test_hull_idempotent_and_vertices_extreme(self):
        """Test hull(vertices) == hull(points) and that every vertex is extreme."""
        rng = np.random.default_rng(5)
        for trial in range(20):
            dim = 2 + trial % 3
            points = [tuple(int(x) for x in rng.integers(0, 5, size=dim)) for _ in range(8 + trial % 5)]
            hull = convex_hull(points)
            if hull.intrinsic_dim < dim:
                continue
            again = convex_hull(hull.vertices)
            assert set(again.vertices) == set(hull.vertices)
            assert all(hull.contains(p) for p in points)
            for v in hull.vertices:
                others = [p for p in hull.vertices if p != v]
                assert not convex_hull(others).contains(v)


class TestLatticeVolume:
    """Test suite for normalized lattice volumes."""

    def test_unit_simplex(self):
        """Test that the elementary simplex has volume 1."""
        assert simplex_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1

    def test_triangle_in_a_plane_lattice(self):
        """Test conv(0, 3a, 3b) in the lattice spanned by a and b has volume 9."""
        a, b = (2, 2, 1), (1, 2, 1)
        hull = convex_hull([(0, 0, 0), tuple(3 * x for x in a), tuple(3 * x for x in b)])
        assert lattice_volume(hull, [a, b]) == 9

    def test_random_polygons_triangulation_independent(self):
        """Test pulling orders agree and match twice the shoelace area."""
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 50:
            points = [tuple(int(x) for x in rng.integers(-4, 5, size=2)) for _ in range(6)]
            hull = convex_hull(points)
            if hull.intrinsic_dim < 2:
                continue
            basis = list(identity(2))
            first = lattice_volume(hull, basis, pick="first")
            last = lattice_volume(hull, basis, pick="last")
            assert first == last
            assert first == shoelace_twice_area([tuple(int(x) for x in v) for v in hull.vertices])
            checked += 1

    def test_triangulation_covers_volume(self):
        """Test that simplices of a pulling triangulation are full-dimensional."""
        hull = convex_hull([(0, 0), (3, 0), (3, 2), (0, 2), (1, 3)])
        for simplex in triangulate(hull):
            assert len(simplex) == 3


class TestCones:
    """Test suite for dual cones and membership."""

    def test_dual_of_positive_orthant(self):
        """Test that the orthant is self-dual."""
        orthant = ConeRep.from_generators(identity(3), 3)
        assert same_cone(dual_cone(orthant), orthant)

    def test_dual_of_ray_has_lineality(self):
        """Test the dual of a ray is a half-space."""
        ray = ConeRep.from_generators([(2, 2, 1)], 3)
        dual = dual_cone(ray)
        rays, lineality = extreme_rays(dual)
        assert len(lineality) == 2
        assert all(dot(r, (2, 2, 1)) > 0 for r in rays)
        assert contains(dual, (1, 0, 0))
        assert not contains(dual, (-1, 0, 0))

    def test_double_dual_on_random_cones(self):
        """Test dual(dual(c)) == c on 50 random cones."""
        rng = np.random.default_rng(23)
        for _ in range(50):
            gens = [tuple(int(x) for x in rng.integers(-3, 4, size=3)) for _ in range(3)]
            gens = [g for g in gens if any(g)]
            if not gens:
                continue
            cone = ConeRep.from_generators(gens, 3)
            assert same_cone(dual_cone(dual_cone(cone)), cone)
            probe = tuple(int(x) for x in rng.integers(-3, 4, size=3))
            assert contains(cone, probe) == contains(dual_cone(dual_cone(cone)), probe)


class TestSubdivision:
    """Test suite for unimodular subdivision."""

    def test_unimodular_cone_untouched(self):
        """Test that a unimodular cone is returned as is."""
        fan = unimodular_subdivide(ConeRep.from_generators(identity(3), 3))
        assert len(fan.cones) == 1
        assert fan.steps == 0

    def test_random_simplicial_cones(self):
        """Test all maximal cones are unimodular and cover the source."""
        rng = np.random.default_rng(29)
        checked = 0
        while checked < 15:
            gens = [tuple(int(x) for x in rng.integers(0, 3, size=3)) for _ in range(3)]
            if abs(determinant(gens)) < 2 or abs(determinant(gens)) > 5:
                continue
            cone = ConeRep.from_generators(gens, 3)
            fan = unimodular_subdivide(cone)
            for piece in fan.maximal():
                assert abs(determinant(piece.generators)) == 1
                assert all(contains(cone, g) for g in piece.generators)
            interior = tuple(sum(col) for col in zip(*cone.generators))
            assert covering_cone(fan, interior)
            checked += 1

    def test_multiplicity(self):
        """Test the index of a simplicial cone."""
        assert multiplicity(ConeRep.from_generators([(1, 0), (1, 3)], 2)) == 3

    def test_budget_exceeded(self):
        """Test SubdivisionBudgetExceeded with a zero budget."""
        rules = ToleranceRules(overrides={"subdivision_budget": 0})
        with pytest.raises(SubdivisionBudgetExceeded):
            unimodular_subdivide(ConeRep.from_generators([(1, 0), (1, 3)], 2), rules)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
