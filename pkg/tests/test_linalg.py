"""Tests for exact rational linear algebra and the simplex solver."""

from fractions import Fraction

import pytest
from src.linalg import (SimplexTableau, UnboundedError, determinant, inverse, is_consistent,
                        only_trivial_solution, rank, rref, strict_point, to_fraction)


class TestElimination:
    """Exact rref, rank and determinants through sympy's DomainMatrix."""

    def test_rref_pivots(self):
        """Pivot columns skip a column that depends on earlier ones."""
        rows = [[1, 2, 3], [2, 4, 7]]

        reduced, pivots = rref(rows, 3)

        assert pivots == (0, 2)
        assert reduced[0] == [1, 2, 0]
        assert all(isinstance(x, Fraction) for row in reduced for x in row)

    def test_rank_of_rational_matrix(self):
        """Rank is computed exactly, without tolerance."""
        rows = [[Fraction(1, 3), Fraction(2, 3)], [1, 2], [0, Fraction(1, 7)]]

        assert rank(rows, 2) == 2
        assert rank(rows[:2], 2) == 1

    def test_rank_of_empty_matrix(self):
        """No rows means rank zero."""
        assert rank([], 3) == 0

    def test_determinant(self):
        """Determinant is exact and the empty determinant is one."""
        assert determinant([[1, -2], [1, 0]]) == 2
        assert determinant([[Fraction(1, 2), 1], [1, 2]]) == 0
        assert determinant([]) == 1

    def test_inverse(self):
        """Inverse of an invertible matrix, None for a singular one."""
        inv = inverse([[1, -2], [1, 0]])

        assert inv == [[0, 1], [Fraction(-1, 2), Fraction(1, 2)]]
        assert inverse([[1, 2], [2, 4]]) is None

    def test_consistency(self):
        """Parallel equations with different constants are inconsistent."""
        assert is_consistent([[1, 0], [2, 0]], [1, 2], 2)
        assert not is_consistent([[1, 0], [2, 0]], [1, 3], 2)

    def test_to_fraction_accepts_sympy_rationals(self):
        """sympy Rational converts exactly."""
        from sympy import Rational

        assert to_fraction(Rational(3, 7)) == Fraction(3, 7)


class TestSimplex:
    """The dense Fraction simplex with Bland's rule."""

    def test_maximize_box(self):
        """max x + y over a box reaches the far corner."""
        tableau = SimplexTableau([[1, 0], [0, 1]], [2, 3], [1, 1])

        assert tableau.maximize() == 5
        assert tableau.solution() == [2, 3]

    def test_unbounded(self):
        """A direction with no limiting row is reported."""
        tableau = SimplexTableau([[-1]], [1], [1])

        with pytest.raises(UnboundedError):
            tableau.maximize()

    def test_negative_rhs_rejected(self):
        """The slack basis must be feasible."""
        with pytest.raises(ValueError):
            SimplexTableau([[1]], [-1], [1])


class TestStrictFeasibility:
    """Witness points of open polyhedra."""

    def test_open_interval(self):
        """0 < x < 1 has a rational witness inside."""
        point = strict_point([(1,), (-1,)], [0, 1], 1)

        assert point is not None
        assert 0 < point[0] < 1

    def test_empty_open_region(self):
        """x > 0 and x < 0 cannot both hold."""
        assert strict_point([(1,), (-1,)], [0, 0], 1) is None

    def test_touching_half_planes(self):
        """x >= 1 and x <= 1 meet, but only on the boundary."""
        assert strict_point([(1,), (-1,)], [-1, 1], 1) is None

    def test_triangle_witness(self):
        """The witness satisfies every strict inequality."""
        normals = [(1, 0), (0, 1), (-1, -1)]
        offsets = [0, 0, 1]

        point = strict_point(normals, offsets, 2)

        assert all(sum(a * x for a, x in zip(n, point)) + o > 0 for n, o in zip(normals, offsets))

    def test_zero_dimension(self):
        """In dimension zero only the constants decide."""
        assert strict_point([(), ()], [1, 2], 0) == ()
        assert strict_point([(), ()], [1, -2], 0) is None


class TestRecessionCone:
    """only_trivial_solution decides boundedness."""

    def test_pointed_cone_is_trivial(self):
        """x >= 0, y >= 0, x + y <= 0 forces zero."""
        assert only_trivial_solution([(1, 0), (0, 1), (-1, -1)], 2)

    def test_quadrant_is_not_trivial(self):
        """x >= 0, y >= 0, -x >= 0 still allows (0, 1)."""
        assert not only_trivial_solution([(1, 0), (0, 1), (-1, 0)], 2)
