"""Tests for the chamber basis and the structure constants."""

import pytest
from src.chambers import enumerate_chambers, random_generic_flag, separating_set, stratify
from src.cli import parse_input
from src.errors import DegreeMismatch, Dependent
from src.fixtures import FIG1
from src.geometry import Arrangement, Flag, Hyperplane, random_arrangement
from src.os_algebra import (ChamberBasis, LinearForm, Monomial, MonomialSum, c_zero, degree_map, epsilon,
                            flatness_defect, gamma_row, os_relations, shorthand, structure_constants, wedge)


def word(*indices):
    """1-based hyperplane labels to 0-based indices."""
    return tuple(i - 1 for i in indices)


def omega(*indices):
    return MonomialSum.from_word(word(*indices))


@pytest.fixture(scope='module')
def fig1():
    arrangement, flag = parse_input(FIG1.text)
    stratification = stratify(arrangement, enumerate_chambers(arrangement), flag)
    basis = ChamberBasis(stratification)
    return basis, structure_constants(basis)


def named(basis, name):
    return next(c for c in basis.stratification.chambers() if c.sign_vector == FIG1.sign_vector(name))


def as_names(basis, vector):
    stratum = basis.stratification.strata[vector.degree]
    names = FIG1.names_by_sign()
    return {names[c.sign_vector]: int(v) for c, v in zip(stratum, vector.coefficients) if v != 0}


def random_basis(seed):
    arrangement = random_arrangement(2 + seed % 2, 3 + seed % 5, seed)
    chambers = enumerate_chambers(arrangement)
    flag = random_generic_flag(arrangement, seed, chambers=chambers)
    return ChamberBasis(stratify(arrangement, chambers, flag))


class TestMonomials:
    """Monomial normal form and wedge products."""

    def test_normalize_tracks_sign(self):
        """ω3 ∧ ω1 = -ω13."""
        sign, monomial = Monomial.normalize((2, 0))

        assert sign == -1
        assert monomial.indices == (0, 2)

    def test_normalize_repeated(self):
        """ω1 ∧ ω1 = 0."""
        assert Monomial.normalize((0, 0)) == (0, None)

    def test_unsorted_monomial_rejected(self):
        """Stored monomials are strictly increasing."""
        with pytest.raises(ValueError):
            Monomial((1, 0))

    def test_wedge_examples(self):
        """ω1∧ω1 = 0, ω2∧ω1 = -ω12, ω1∧ω24 = ω124."""
        assert wedge(0, omega(1)).is_zero()
        assert wedge(1, omega(1)) == omega(1, 2).scale(-1)
        assert wedge(0, omega(2, 4)) == omega(1, 2, 4)

    def test_degree_mismatch(self):
        """Sums of different degrees cannot be added."""
        with pytest.raises(DegreeMismatch):
            omega(1) + omega(1, 2)

    def test_zero_terms_dropped(self):
        """ω1 - ω1 has no terms."""
        assert (omega(1) - omega(1)).terms == {}

    def test_printing(self):
        """Monomials print with packed subscripts."""
        assert str(omega(1, 2) - omega(2, 4).scale(2)) == 'ω₁₂ - 2ω₂₄'
        assert str(MonomialSum.unit()) == '1'


class TestFarChamber:
    """c_zero and epsilon on the fig1 arrangement."""

    def test_c_zero_degree_one(self, fig1):
        """C0(1) is the side of H1 away from F^0, which holds B1."""
        basis, _ = fig1

        assert c_zero(basis.arrangement, basis.flag, word(1)) == (-1,)

    def test_c_zero_degree_two(self, fig1):
        """C0(1,3) is {α1 < 0, α3 > 0}, the chamber holding C1..C4."""
        basis, _ = fig1

        assert c_zero(basis.arrangement, basis.flag, word(1, 3)) == (-1, 1)

    def test_c_zero_empty_tuple(self, fig1):
        """The empty tuple gives the whole space."""
        basis, _ = fig1

        assert c_zero(basis.arrangement, basis.flag, ()) == ()

    def test_c_zero_dependent(self):
        """Parallel lines have no far chamber."""
        arrangement = Arrangement(2, [Hyperplane([1, 0], 0), Hyperplane([1, 0], -1), Hyperplane([0, 1], 0)])
        flag = Flag((3, 5), ((1, 1), (0, 1)))

        with pytest.raises(Dependent):
            c_zero(arrangement, flag, (0, 1))

    def test_epsilon_examples(self, fig1):
        """ε(1) = ε(3,4) = -1."""
        basis, _ = fig1

        assert epsilon(basis.arrangement, basis.flag, word(1)) == -1
        assert epsilon(basis.arrangement, basis.flag, word(3, 4)) == -1
        assert epsilon(basis.arrangement, basis.flag, ()) == 1

    def test_epsilon_antisymmetric(self, fig1):
        """Swapping two indices flips ε."""
        basis, _ = fig1

        for i, j in [(1, 2), (1, 3), (2, 4), (3, 4)]:
            assert epsilon(basis.arrangement, basis.flag, word(j, i)) == -epsilon(basis.arrangement, basis.flag, word(i, j))

    def test_epsilon_repeated(self, fig1):
        """A repeated index gives 0."""
        basis, _ = fig1

        assert epsilon(basis.arrangement, basis.flag, word(2, 2)) == 0


class TestChamberBasis:
    """ξ and ν against the tables stored with the fig1 fixture."""

    def test_xi_table(self, fig1):
        """Every ξ(ω_I) in the fixture table."""
        basis, _ = fig1

        for indices, expected in FIG1.xi.items():
            vector = basis.xi(MonomialSum(len(indices), {Monomial(word(*indices)): 1}))
            assert as_names(basis, vector) == expected

    def test_xi_of_non_pivot_column(self, fig1):
        """ξ(ω23) = -[C2] - [C4], a column outside the pivot set."""
        basis, _ = fig1

        assert as_names(basis, basis.xi(omega(2, 3))) == {'C2': -1, 'C4': -1}

    def test_nu_table(self, fig1):
        """Every ν(C) in the fixture table."""
        basis, _ = fig1

        for name, expected in FIG1.nu.items():
            got = {tuple(i + 1 for i in m.indices): c for m, c in basis.nu(named(basis, name)).terms.items()}
            assert got == expected

    def test_inverse_pair(self, fig1):
        """ξ(ν(C)) = [C] for every chamber."""
        basis, _ = fig1

        for chamber in basis.stratification.chambers():
            assert basis.xi(basis.nu(chamber)) == basis.unit_vector(chamber)

    def test_integral(self, fig1):
        """All ν coefficients are integers here."""
        basis, _ = fig1

        assert basis.integral

    def test_pivot_columns(self, fig1):
        """ω23 lies in the span of earlier columns, so ν never uses it."""
        basis, _ = fig1

        used = {m.indices for c in basis.stratification.strata[2] for m in basis.nu(c).terms}

        assert word(2, 3) not in used

    def test_antisymmetry(self, fig1):
        """ξ(ω_{ji}) = -ξ(ω_{ij})."""
        basis, _ = fig1

        for monomial in basis.independent_tuples(2):
            i, j = monomial.indices
            assert basis.xi_word((j, i)) == basis.xi_word((i, j)).scale(-1)

    def test_degree_out_of_range(self, fig1):
        """No cohomology above the dimension."""
        basis, _ = fig1

        with pytest.raises(DegreeMismatch):
            basis.xi(omega(1, 2, 3))

    def test_relations_annihilated(self, fig1):
        """ξ kills the boundary ω23 - ω13 + ω12 of the triple point."""
        basis, _ = fig1

        relations = list(os_relations(basis, 2))

        assert omega(2, 3) - omega(1, 3) + omega(1, 2) in relations
        assert all(basis.xi(r).is_zero() for r in relations)

    def test_relations_on_random_arrangements(self):
        """ξ kills every Orlik-Solomon relation."""
        for seed in range(15):
            basis = random_basis(seed)
            for q in range(basis.arrangement.dimension + 1):
                for relation in os_relations(basis, q):
                    assert basis.xi(relation).is_zero()

    def test_parallel_pair_relation(self):
        """ω_J = 0 when the hyperplanes of J do not meet."""
        arrangement = Arrangement(2, [Hyperplane([1, 0], 0), Hyperplane([1, 0], -1), Hyperplane([0, 1], 0)])
        chambers = enumerate_chambers(arrangement)
        basis = ChamberBasis(stratify(arrangement, chambers, random_generic_flag(arrangement, 0, chambers=chambers)))

        assert MonomialSum.from_word((0, 1)) in list(os_relations(basis, 2))


class TestStructureConstants:
    """Γ = N λ_S."""

    def test_wedge_table(self, fig1):
        """Both ω_λ ∧ ν tables of fig1, with signs."""
        basis, constants = fig1
        names = FIG1.names_by_sign()

        for name, expected in FIG1.wedge.items():
            source = named(basis, name)
            got = {names[e.target.sign_vector]: (e.multiplicity, tuple(sorted(i + 1 for i in e.separating)))
                   for e in constants.entries if e.source == source}
            assert got == expected

    def test_gamma_examples(self, fig1):
        """Γ(A, B1) = -λ1 and Γ(B1, C3) = -λ234."""
        basis, constants = fig1

        first = constants.lookup(named(basis, 'A'), named(basis, 'B1'))
        second = constants.lookup(named(basis, 'B1'), named(basis, 'C3'))

        assert first.gamma == LinearForm((-1, 0, 0, 0))
        assert str(first) == '-λ₁'
        assert str(second) == '-λ₂₃₄'

    def test_absent_pair(self, fig1):
        """Γ(B2, C1) = 0 although H1 and H3 separate them."""
        basis, constants = fig1
        b2, c1 = named(basis, 'B2'), named(basis, 'C1')

        assert constants.lookup(b2, c1) is None
        assert separating_set(b2, c1) == {0, 2}
        assert gamma_row(basis, b2)[c1].is_zero()

    def test_multiplicity_matrix(self, fig1):
        """N^0 is the column (-1, 1, 1, 1) over B1..B4."""
        basis, constants = fig1

        assert constants.multiplicity_matrix(0) == [[-1], [1], [1], [1]]

    def test_degree_map(self, fig1):
        """deg(C', C) = -sgn(C') N."""
        basis, constants = fig1
        degrees = degree_map(constants)

        assert degrees[(named(basis, 'B1'), named(basis, 'A'))] == -1
        assert degrees[(named(basis, 'B2'), named(basis, 'A'))] == -1

    def test_flatness(self, fig1):
        """Γ^1 Γ^0 vanishes identically in λ."""
        _, constants = fig1

        assert flatness_defect(constants) == []

    def test_representative_independence(self):
        """Adding a degree-2 relation to ν(C) leaves Γ unchanged in dimension 3."""
        # x = 0 and x = 1 are parallel; y = 0, z = 0 and y = z share the x-axis
        arrangement = Arrangement(3, [Hyperplane([1, 0, 0], 0), Hyperplane([1, 0, 0], -1),
                                      Hyperplane([0, 1, 0], 0), Hyperplane([0, 0, 1], 0),
                                      Hyperplane([1, 1, 1], -2), Hyperplane([0, 1, -1], 0)])
        chambers = enumerate_chambers(arrangement)
        basis = ChamberBasis(stratify(arrangement, chambers, random_generic_flag(arrangement, 0, chambers=chambers)))
        relations = list(os_relations(basis, 2))

        assert MonomialSum.from_word((0, 1)) in relations
        assert MonomialSum.from_word((3, 5)) - MonomialSum.from_word((2, 5)) + MonomialSum.from_word((2, 3)) in relations
        for k, chamber in enumerate(basis.stratification.strata[2]):
            shifted = basis.nu(chamber) + relations[k % len(relations)].scale(k + 1)
            assert gamma_row(basis, chamber, shifted) == gamma_row(basis, chamber)

    def test_factorization_on_random_arrangements(self):
        """Every Γ is an integer multiple of its separating form, and the symbolic complex is flat."""
        for seed in range(50):
            basis = random_basis(seed)

            constants = structure_constants(basis)

            assert flatness_defect(constants) == []
            for entry in constants.entries:
                assert entry.gamma.factor(entry.separating) == entry.multiplicity

    def test_factor(self):
        """LinearForm.factor recognises N λ_S and nothing else."""
        assert LinearForm((0, 2, 2)).factor(frozenset({1, 2})) == 2
        assert LinearForm((0, 2, 1)).factor(frozenset({1, 2})) is None
        assert LinearForm((1, 0, 0)).factor(frozenset({1})) is None
        assert LinearForm((0, 0, 0)).factor(frozenset({1})) == 0

    def test_shorthand(self):
        """Packed λ notation."""
        assert shorthand(1, {1, 2, 3}) == 'λ₂₃₄'
        assert shorthand(-2, {0}) == '-2λ₁'
