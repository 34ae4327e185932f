"""Tests for chamber enumeration and flag stratification."""

import pytest
from src.chambers import (brute_force_sign_vectors, enumerate_chambers, format_signs, random_generic_flag,
                          separating_set, stratify)
from src.cli import parse_input
from src.errors import NonEssential, NotGeneric
from src.fixtures import FIG1
from src.geometry import Arrangement, Flag, Hyperplane, betti_vector, build_poset, random_arrangement


@pytest.fixture(scope='module')
def fig1():
    arrangement, flag = parse_input(FIG1.text)
    chambers = enumerate_chambers(arrangement)
    return arrangement, flag, chambers, stratify(arrangement, chambers, flag)


def named(chambers, name):
    return next(c for c in chambers if c.sign_vector == FIG1.sign_vector(name))


class TestEnumeration:
    """enumerate_chambers and boundedness."""

    def test_fig1_counts(self, fig1):
        """Ten chambers, two of them bounded."""
        _, _, chambers, _ = fig1

        assert len(chambers) == 10
        assert sum(c.bounded for c in chambers) == 2

    def test_fig1_sign_vectors(self, fig1):
        """The sign vectors are exactly those of the named chambers."""
        _, _, chambers, _ = fig1

        assert {c.label for c in chambers} == set(FIG1.chamber_names.values())

    def test_fig1_bounded_chambers(self, fig1):
        """The two triangles above the triple point are bounded."""
        _, _, chambers, _ = fig1

        bounded = {format_signs(c.sign_vector) for c in chambers if c.bounded}

        assert bounded == {FIG1.chamber_names[name] for name in FIG1.bounded}

    def test_witnesses_have_matching_signs(self, fig1):
        """Every witness lies strictly inside its chamber."""
        arrangement, _, chambers, _ = fig1

        for chamber in chambers:
            assert arrangement.signs_at(chamber.witness) == chamber.sign_vector

    def test_single_point_on_line(self):
        """A point splits the line into two unbounded chambers."""
        chambers = enumerate_chambers(Arrangement(1, [Hyperplane([1], 0)]))

        assert len(chambers) == 2
        assert not any(c.bounded for c in chambers)

    def test_three_generic_lines(self):
        """Three lines in general position: seven chambers, one triangle."""
        arrangement = Arrangement(2, [Hyperplane([1, 0], 0), Hyperplane([0, 1], 0), Hyperplane([1, 1], -1)])

        chambers = enumerate_chambers(arrangement)

        assert len(chambers) == 7
        assert sum(c.bounded for c in chambers) == 1
        assert [c.sign_vector for c in chambers] == brute_force_sign_vectors(arrangement)

    def test_non_essential_rejected(self):
        """Parallel lines have no vertex."""
        arrangement = Arrangement(2, [Hyperplane([1, 0], 0), Hyperplane([1, 0], -1)])

        with pytest.raises(NonEssential):
            enumerate_chambers(arrangement)

    def test_sorted_by_sign_vector(self, fig1):
        """Chambers come out in sign-vector order."""
        _, _, chambers, _ = fig1

        assert [c.sign_vector for c in chambers] == sorted(c.sign_vector for c in chambers)

    def test_zaslavsky_on_random_arrangements(self):
        """|ch| = π(A, 1) and |bch| = β for random essential arrangements."""
        for seed in range(50):
            dimension = 2 + seed % 2
            arrangement = random_arrangement(dimension, 4 + seed % 5, seed)
            betti = betti_vector(build_poset(arrangement))

            chambers = enumerate_chambers(arrangement)

            assert len(chambers) == betti.total
            assert sum(c.bounded for c in chambers) == betti.beta

    def test_enumeration_matches_brute_force(self):
        """Incremental insertion finds exactly the realizable sign vectors."""
        for seed in range(10):
            arrangement = random_arrangement(2, 5, seed)

            chambers = enumerate_chambers(arrangement)

            assert [c.sign_vector for c in chambers] == brute_force_sign_vectors(arrangement)


class TestStratification:
    """stratify and sgn."""

    def test_fig1_strata(self, fig1):
        """ch^0 = {A}, ch^1 = {B1..B4}, ch^2 = {C1..C5}."""
        _, _, chambers, stratification = fig1

        assert stratification.sizes == (1, 4, 5)
        for q, names in enumerate(FIG1.strata):
            assert set(stratification.strata[q]) == {named(chambers, n) for n in names}

    def test_fig1_sgn(self, fig1):
        """B1 lies on the negative side of F^0 along v1; everything else is positive."""
        _, _, chambers, stratification = fig1

        for name, expected in FIG1.sgn.items():
            assert stratification.sgn[named(chambers, name)] == expected

    def test_sections_lie_in_chamber(self, fig1):
        """The recorded section point is in C ∩ F^q."""
        arrangement, flag, _, stratification = fig1

        for chamber, point in stratification.sections.items():
            assert arrangement.signs_at(flag.point(point)) == chamber.sign_vector

    def test_one_point_in_line(self):
        """Flag point left of the hyperplane: strata (1, 1)."""
        arrangement = Arrangement(1, [Hyperplane([1], 0)])
        flag = Flag((-1,), ((1,),))

        stratification = stratify(arrangement, enumerate_chambers(arrangement), flag)

        assert stratification.sizes == (1, 1)
        assert stratification.strata[0][0].sign_vector == (-1,)
        assert stratification.sgn[stratification.strata[1][0]] == 1

    def test_nongeneric_flag_rejected(self, fig1):
        """A flag through the triple point cannot stratify."""
        arrangement, _, chambers, _ = fig1

        with pytest.raises(NotGeneric):
            stratify(arrangement, chambers, Flag((170, 60), ((1, 0), (0, 1))))

    def test_partition_on_random_arrangements(self):
        """Strata partition the chambers with sizes b_q."""
        for seed in range(20):
            arrangement = random_arrangement(2 + seed % 2, 5, seed)
            chambers = enumerate_chambers(arrangement)
            flag = random_generic_flag(arrangement, seed, chambers=chambers)

            stratification = stratify(arrangement, chambers, flag)

            assert stratification.sizes == betti_vector(build_poset(arrangement)).coefficients
            assert sorted(c.sign_vector for c in stratification.chambers()) == [c.sign_vector for c in chambers]


class TestSeparatingSets:
    """separating_set."""

    def test_same_chamber(self, fig1):
        """S(C, C) is empty."""
        _, _, chambers, _ = fig1

        assert separating_set(chambers[0], chambers[0]) == frozenset()

    def test_fig1_examples(self, fig1):
        """S(B2, C2) = {1, 2, 3} and S(A, B4) = {2, 3, 4} (1-based)."""
        _, _, chambers, _ = fig1

        assert separating_set(named(chambers, 'B2'), named(chambers, 'C2')) == {0, 1, 2}
        assert separating_set(named(chambers, 'A'), named(chambers, 'B4')) == {1, 2, 3}

    def test_symmetric_and_triangle(self, fig1):
        """Symmetry, nonemptiness and the triangle property over all chambers."""
        _, _, chambers, _ = fig1

        for a in chambers:
            for b in chambers:
                assert separating_set(a, b) == separating_set(b, a)
                assert bool(separating_set(a, b)) == (a != b)
                for c in chambers:
                    assert separating_set(a, c) <= separating_set(a, b) | separating_set(b, c)


class TestRandomGenericFlag:
    """random_generic_flag."""

    def test_valid_candidate_returned_unchanged(self, fig1):
        """The bundled flag is already generic."""
        arrangement, flag, _, _ = fig1

        assert random_generic_flag(arrangement, 0, candidate=flag) is flag

    def test_invalid_candidate_replaced(self, fig1):
        """A flag through the triple point is swapped for a random one."""
        arrangement, _, _, _ = fig1
        bad = Flag((170, 60), ((1, 0), (0, 1)))

        assert random_generic_flag(arrangement, 0, candidate=bad) != bad

    def test_deterministic(self, fig1):
        """Seed 0 twice gives the same flag."""
        arrangement, _, _, _ = fig1

        assert random_generic_flag(arrangement, 0) == random_generic_flag(arrangement, 0)
