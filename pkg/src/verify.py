"""The invariant suite run by the `verify` command."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional

import numpy as np

from . import linalg
from .chambers import brute_force_sign_vectors, separating_set
from .complexes import (WeightVector, aomoto_complex, cohomology_dims, composition_defect,
                        linearization_check, minimal_complex, tangent_cone_compare)
from .errors import ArrangementError
from .fixtures import Fixture
from .geometry import betti_vector, build_poset, restrict
from .os_algebra import Monomial, MonomialSum, flatness_defect, gamma_row, os_relations
from .pipeline import Pipeline

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ''


def random_complex_weights(rng: np.random.Generator, size: int) -> WeightVector:
    """Real parts in [-3, 3], imaginary parts in [-1, 1]."""
    return WeightVector(tuple(complex(a, b) for a, b in
                              zip(rng.uniform(-3, 3, size), rng.uniform(-1, 1, size))))


def random_unit_weights(rng: np.random.Generator, size: int) -> WeightVector:
    """Complex weights with modulus at most 1."""
    radius = np.sqrt(rng.uniform(0, 1, size))
    angle = rng.uniform(0, 2 * np.pi, size)
    return WeightVector(tuple(complex(r * np.cos(a), r * np.sin(a)) for r, a in zip(radius, angle)))


def random_small_rational_weights(rng: np.random.Generator, size: int) -> WeightVector:
    """Rationals p / (20(n+1)) with |p| <= 9, strictly inside the small-weight bound."""
    denominator = 20 * (size + 1)
    return WeightVector(tuple(Fraction(int(p), denominator) for p in rng.integers(-9, 10, size)))


def random_rational_weights(rng: np.random.Generator, size: int) -> WeightVector:
    """Nonzero rationals p / q with |p| < 98 and 0 < q < 50."""
    signs = rng.choice((-1, 1), size)
    return WeightVector(tuple(Fraction(int(s * p), int(q)) for s, p, q in
                              zip(signs, rng.integers(1, 98, size), rng.integers(1, 50, size))))


def _check(name: str, test: Callable[[], Optional[str]]) -> CheckResult:
    """Run one check; it returns None on success or a failure description."""
    try:
        problem = test()
    except ArrangementError as e:
        problem = f"{type(e).__name__}: {e}"
    if problem:
        logger.info("check %s failed: %s", name, problem)
    return CheckResult(name, not problem, problem or '')


def check_poset(pipeline: Pipeline) -> List[CheckResult]:
    poset = pipeline.poset
    ell = pipeline.arrangement.dimension

    def mobius():
        for flat in poset.flats():
            if flat.rank > 0:
                total = poset.mobius[flat] + sum(poset.mobius[y] for y in poset.below[flat])
                if total != 0:
                    return f"Σ μ below {flat.label} is {total}"

    def grading():
        for flat in poset.flats():
            normals = [pipeline.arrangement.hyperplanes[i].coefficients for i in flat.generators]
            if linalg.rank(normals, ell) != flat.rank:
                return f"flat {flat.label} has rank {flat.rank} but its generators span {linalg.rank(normals, ell)}"

    def truncation():
        for q in range(1, ell + 1):
            restricted = betti_vector(build_poset(restrict(pipeline.arrangement, pipeline.flag, q, poset)))
            if restricted.coefficients != pipeline.betti.truncated(q):
                return f"q={q}: {restricted.coefficients} != {pipeline.betti.truncated(q)}"

    return [_check('mobius recursion', mobius), _check('rank grading', grading),
            _check('truncation', truncation)]


def check_chambers(pipeline: Pipeline) -> List[CheckResult]:
    chambers = pipeline.chambers
    betti = pipeline.betti

    def zaslavsky():
        bounded = sum(c.bounded for c in chambers)
        if len(chambers) != betti.total or bounded != betti.beta:
            return f"{len(chambers)} chambers, {bounded} bounded; expected {betti.total}, {betti.beta}"

    def realizability():
        for chamber in chambers:
            if pipeline.arrangement.signs_at(chamber.witness) != chamber.sign_vector:
                return f"witness of {chamber.label} has the wrong signs"
        if len(pipeline.arrangement) <= pipeline.defaults.brute_force_limit:
            if brute_force_sign_vectors(pipeline.arrangement) != [c.sign_vector for c in chambers]:
                return "brute-force sign vectors differ from the enumeration"

    def partition():
        stratification = pipeline.stratification
        if stratification.sizes != betti.coefficients:
            return f"strata sizes {stratification.sizes} != {betti.coefficients}"
        if sorted(c.sign_vector for c in stratification.chambers()) != [c.sign_vector for c in chambers]:
            return "strata do not partition the chambers"

    def separation():
        sample = chambers[:30]
        for a, b in combinations(sample, 2):
            if separating_set(a, b) != separating_set(b, a) or not separating_set(a, b):
                return f"S({a.label}, {b.label}) is not symmetric and nonempty"
        for a in sample:
            for b in sample:
                for c in sample:
                    if not separating_set(a, c) <= separating_set(a, b) | separating_set(b, c):
                        return f"triangle property fails for {a.label}, {b.label}, {c.label}"

    return [_check('zaslavsky', zaslavsky), _check('sign-vector realizability', realizability),
            _check('stratification partition', partition), _check('separating sets', separation)]


def check_basis(pipeline: Pipeline, rng: np.random.Generator) -> List[CheckResult]:
    ell = pipeline.arrangement.dimension

    def inverse_pair():
        basis = pipeline.basis
        for chamber in pipeline.stratification.chambers():
            if basis.xi(basis.nu(chamber)) != basis.unit_vector(chamber):
                return f"ξ(ν({pipeline.label(chamber)})) is not the unit vector"

    def relations():
        for q in range(ell + 1):
            for relation in os_relations(pipeline.basis, q):
                if not pipeline.basis.xi(relation).is_zero():
                    return f"ξ({relation}) is not zero"

    def antisymmetry():
        basis = pipeline.basis
        for q in range(2, ell + 1):
            for monomial in basis.independent_tuples(q):
                indices = monomial.indices
                swapped = (indices[1], indices[0]) + indices[2:]
                if basis.xi_word(swapped) != basis.xi_word(indices).scale(-1):
                    return f"ξ is not antisymmetric on {monomial}"

    def factorization():
        pipeline.constants

    def flatness():
        defects = flatness_defect(pipeline.constants)
        if defects:
            q, source, target = defects[0]
            return f"{len(defects)} nonzero compositions, first at {pipeline.label(source)} -> {pipeline.label(target)}"

    def representatives():
        basis = pipeline.basis
        for q in range(ell):
            pool = list(os_relations(basis, q))
            if not pool:
                continue
            for chamber in pipeline.stratification.strata[q]:
                relation = pool[int(rng.integers(len(pool)))]
                shifted = basis.nu(chamber) + relation.scale(int(rng.integers(1, 4)))
                if gamma_row(basis, chamber, shifted) != gamma_row(basis, chamber):
                    return f"Γ at {pipeline.label(chamber)} depends on the representative"

    return [_check('inverse pair', inverse_pair), _check('relations annihilated', relations),
            _check('antisymmetry', antisymmetry), _check('factorization', factorization),
            _check('symbolic flatness', flatness), _check('representative independence', representatives)]


def check_complexes(pipeline: Pipeline, rng: np.random.Generator) -> List[CheckResult]:
    defaults = pipeline.defaults
    n = len(pipeline.arrangement)
    betti = pipeline.betti

    def is_complex():
        sc = pipeline.constants
        for _ in range(defaults.samples):
            defects = composition_defect(minimal_complex(sc, random_complex_weights(rng, n)))
            if any(d > defaults.composition_tolerance for d in defects):
                return f"composition defect {max(defects):.3g}"

    def periodicity():
        sc = pipeline.constants
        for _ in range(defaults.samples):
            weights = random_complex_weights(rng, n)
            base = minimal_complex(sc, weights)
            for i in range(n):
                shifted = minimal_complex(sc, weights.shifted(i, 2))
                for a, b in zip(base.matrices, shifted.matrices):
                    if not np.allclose(a, b, rtol=0, atol=1e-12 * (1 + np.max(np.abs(a), initial=0))):
                        return f"shifting λ_{i + 1} by 2 changes the minimal complex"

    def monodromy():
        sc = pipeline.constants
        weights = random_complex_weights(rng, n)
        shift = [2 * int(k) for k in rng.integers(-2, 3, n)]
        moved = WeightVector(tuple(v + s for v, s in zip(weights.values, shift)))
        for a, b in zip(minimal_complex(sc, weights).matrices, minimal_complex(sc, moved).matrices):
            if not np.allclose(a, b, rtol=1e-9, atol=1e-9):
                return "weights congruent mod 2 give different minimal complexes"

    def betti_at_zero():
        zero = WeightVector(tuple(Fraction(0) for _ in range(n)))
        dims = cohomology_dims(minimal_complex(pipeline.constants, zero), defaults.tolerance).dims
        if dims != betti.coefficients:
            return f"dims at λ = 0 are {dims}"

    def linearization():
        sc = pipeline.constants
        for _ in range(defaults.samples):
            weights = random_unit_weights(rng, n)
            error = linearization_check(sc, weights, defaults.step)
            if error > 1e-4:
                return f"error {error:.3g} at h = {defaults.step}"
            halved = linearization_check(sc, weights, defaults.step / 2)
            if not 3 <= error / halved <= 5:
                return f"halving h changed the error by a factor {error / halved:.3g}"

    def tangent_cone():
        sc = pipeline.constants
        for _ in range(defaults.samples):
            report = tangent_cone_compare(sc, random_small_rational_weights(rng, n), defaults.tolerance)
            if not report.agree:
                return f"minimal {report.minimal.dims} vs aomoto {report.aomoto.dims}"

    def generic_vanishing():
        sc = pipeline.constants
        expected = (0,) * pipeline.arrangement.dimension + (betti.beta,)
        exact = cohomology_dims(aomoto_complex(sc, random_rational_weights(rng, n)), exact=True)
        floating = cohomology_dims(minimal_complex(sc, random_complex_weights(rng, n)), defaults.tolerance)
        for report in (exact, floating):
            if report.euler != betti.euler_characteristic:
                return f"Euler characteristic {report.euler} != {betti.euler_characteristic}"
        if exact.dims != expected or floating.dims != expected:
            return f"generic dims {floating.dims} (exact Aomoto {exact.dims}), expected {expected}"

    return [_check('minimal complex', is_complex), _check('periodicity', periodicity),
            _check('monodromy dependence', monodromy), _check('betti at zero', betti_at_zero),
            _check('linearization', linearization), _check('tangent cone', tangent_cone),
            _check('generic vanishing', generic_vanishing)]


def compare_with_fixture(pipeline: Pipeline, fixture: Fixture) -> List[str]:
    """Differences between the computed tables and the ones stored with the fixture."""
    stratification = pipeline.stratification
    basis = pipeline.basis
    names = fixture.names_by_sign()
    by_sign = {c.sign_vector: c for c in pipeline.chambers}
    missing = [name for name in fixture.chamber_names if fixture.sign_vector(name) not in by_sign]
    if missing or len(by_sign) != len(names):
        return [f"chambers differ: missing {missing}, {len(by_sign)} found"]
    by_name = {name: by_sign[fixture.sign_vector(name)] for name in fixture.chamber_names}

    def label(chamber):
        return names[chamber.sign_vector]

    problems = []

    for q, expected in enumerate(fixture.strata):
        if sorted(expected) != sorted(label(c) for c in stratification.strata[q]):
            problems.append(f"stratum {q} differs")
    for name, expected in fixture.sgn.items():
        if stratification.sgn.get(by_name.get(name)) != expected:
            problems.append(f"sgn({name}) differs")
    if sorted(fixture.bounded) != sorted(label(c) for c in pipeline.chambers if c.bounded):
        problems.append("bounded chambers differ")

    for word, expected in fixture.xi.items():
        indices = tuple(i - 1 for i in word)
        vector = basis.xi(MonomialSum(len(indices), {Monomial(indices): 1}))
        got = {label(c): int(v) for c, v in zip(stratification.strata[len(indices)],
                                                         vector.coefficients) if v != 0}
        if got != dict(expected):
            problems.append(f"ξ(ω{word}) = {got}, expected {dict(expected)}")

    for name, expected in fixture.nu.items():
        got = {tuple(i + 1 for i in m.indices): c for m, c in basis.nu(by_name[name]).terms.items()}
        if got != dict(expected):
            problems.append(f"ν({name}) = {got}, expected {dict(expected)}")

    constants = pipeline.constants
    for name, row in fixture.wedge.items():
        source = by_name[name]
        got = {label(e.target): (e.multiplicity, tuple(sorted(i + 1 for i in e.separating)))
               for e in constants.entries if e.source == source}
        if got != dict(row):
            problems.append(f"ω_λ ∧ ν({name}) = {got}, expected {dict(row)}")
    return problems


def run_checks(pipeline: Pipeline, fixture: Optional[Fixture] = None) -> List[CheckResult]:
    """
    Run every invariant check against one arrangement.

    Args:
        pipeline: Pipeline for the arrangement under test
        fixture: Expected tables to compare with, if any

    Returns:
        One CheckResult per check, in a fixed order
    """
    rng = np.random.default_rng(pipeline.defaults.seed)
    results = check_poset(pipeline) + check_chambers(pipeline)
    results += check_basis(pipeline, rng) + check_complexes(pipeline, rng)
    if fixture is not None:
        results.append(_check(f'{fixture.name} tables',
                              lambda: '; '.join(compare_with_fixture(pipeline, fixture))))
    return results
