"""Aomoto and minimal cochain complexes on the flag strata, and their cohomology."""

import cmath
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .errors import NotAComplex, WeightError
from .os_algebra import StructureConstants

logger = logging.getLogger(__name__)

Weight = Union[Fraction, complex]


@dataclass(frozen=True)
class WeightVector:
    """Weights λ_1..λ_n; exact when every entry is rational."""
    values: Tuple[Weight, ...]

    def __post_init__(self):
        values = []
        for v in self.values:
            if isinstance(v, (int, Fraction)):
                values.append(Fraction(v))
            else:
                value = complex(v)
                if not cmath.isfinite(value):
                    raise WeightError(f"weight {v!r} is not finite")
                values.append(value)
        object.__setattr__(self, 'values', tuple(values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def as_array(self) -> np.ndarray:
        return np.array([complex(v) for v in self.values], dtype=complex)

    def as_fractions(self) -> Tuple[Fraction, ...]:
        if not self.exact:
            raise WeightError("exact mode needs rational weights")
        return self.values

    def scaled(self, factor: float) -> 'WeightVector':
        return WeightVector(tuple(complex(v) * factor for v in self.values))

    def shifted(self, index: int, amount) -> 'WeightVector':
        values = list(self.values)
        values[index] = values[index] + amount
        return WeightVector(tuple(values))

    def check_length(self, size: int) -> None:
        if len(self.values) != size:
            raise WeightError(f"expected {size} weights, got {len(self.values)}")


@dataclass(frozen=True)
class CochainComplex:
    """
    Differentials D^q : C^q -> C^{q+1} as b_{q+1} x b_q complex matrices.

    `exact` holds the unscaled rational Γ matrices when the complex is an
    Aomoto complex built from rational weights.
    """
    kind: str
    matrices: Tuple[np.ndarray, ...]
    sizes: Tuple[int, ...]
    labels: Tuple[Tuple[str, ...], ...]
    exact: Optional[Tuple[List[List[Fraction]], ...]] = None


@dataclass(frozen=True)
class BettiReport:
    """Cohomology dimensions h^q with the ranks they were computed from."""
    dims: Tuple[int, ...]
    ranks: Tuple[int, ...]
    tolerance: float
    exact: bool

    @property
    def euler(self) -> int:
        return sum((-1) ** q * h for q, h in enumerate(self.dims))

    def rank_in(self, q: int) -> int:
        return self.ranks[q - 1] if q > 0 else 0

    def rank_out(self, q: int) -> int:
        return self.ranks[q] if q < len(self.ranks) else 0

    def to_dict(self) -> List[dict]:
        return [{'degree': q, 'dim': h, 'rank_in': self.rank_in(q), 'rank_out': self.rank_out(q),
                 'tolerance': self.tolerance, 'euler': self.euler}
                for q, h in enumerate(self.dims)]


@dataclass(frozen=True)
class TangentConeReport:
    minimal: BettiReport
    aomoto: BettiReport
    in_small_regime: bool

    @property
    def agree(self) -> bool:
        return self.minimal.dims == self.aomoto.dims


def _labels(sc: StructureConstants) -> Tuple[Tuple[str, ...], ...]:
    return tuple(tuple(c.label for c in stratum) for stratum in sc.stratification.strata)


def _assemble(sc: StructureConstants, entry_value) -> Tuple[np.ndarray, ...]:
    strata = sc.stratification.strata
    matrices = []
    for q in range(sc.dimension):
        rows = {c: i for i, c in enumerate(strata[q + 1])}
        cols = {c: j for j, c in enumerate(strata[q])}
        matrix = np.zeros((len(strata[q + 1]), len(strata[q])), dtype=complex)
        for entry in sc.degree_entries(q):
            matrix[rows[entry.target], cols[entry.source]] = entry_value(entry)
        matrices.append(matrix)
    return tuple(matrices)


def _separating_weights(entry, weights: np.ndarray) -> complex:
    return complex(sum(weights[i] for i in entry.separating))


def aomoto_complex(sc: StructureConstants, weights: WeightVector) -> CochainComplex:
    """
    The Aomoto complex 2π√-1 ω_λ∧ in the chamber basis.

    Entry (C', C) of D^q is 2π√-1 · N_{C,C'} · λ_{S(C,C')}.
    """
    weights.check_length(sc.size)
    values = weights.as_array()
    matrices = _assemble(
        sc, lambda e: 2j * np.pi * e.multiplicity * _separating_weights(e, values))
    exact = None
    if weights.exact:
        exact = tuple(sc.gamma_matrix(q, weights.values) for q in range(sc.dimension))
    sizes = sc.stratification.sizes
    return CochainComplex('aomoto', matrices, sizes, _labels(sc), exact)


def minimal_complex(sc: StructureConstants, weights: WeightVector) -> CochainComplex:
    """
    The minimal complex ∇̃_λ.

    Entry (C', C) of D^q is -2 · N_{C,C'} · sinh(π√-1 λ_{S(C,C')}).
    """
    weights.check_length(sc.size)
    values = weights.as_array()
    matrices = _assemble(
        sc, lambda e: -2 * e.multiplicity * np.sinh(1j * np.pi * _separating_weights(e, values)))
    return CochainComplex('minimal', matrices, sc.stratification.sizes, _labels(sc))


def monodromies(weights: WeightVector) -> np.ndarray:
    """Monodromy e^{2π√-1 λ_i} around each hyperplane."""
    return np.exp(2j * np.pi * weights.as_array())


def composition_defect(cx: CochainComplex) -> List[float]:
    """‖D^{q+1} D^q‖ / (‖D^{q+1}‖ ‖D^q‖) for each q, 0 when either factor vanishes."""
    defects = []
    for first, second in zip(cx.matrices, cx.matrices[1:]):
        scale = np.linalg.norm(second) * np.linalg.norm(first)
        defects.append(float(np.linalg.norm(second @ first) / scale) if scale > 0 else 0.0)
    return defects


def _numerical_rank(matrix: np.ndarray, tolerance: float) -> int:
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular > tolerance * singular[0]))


def _exact_product_is_zero(first: List[List[Fraction]], second: List[List[Fraction]]) -> bool:
    inner = len(first)
    return all(
        sum((row[k] * first[k][j] for k in range(inner)), Fraction(0)) == 0
        for row in second for j in range(len(first[0]) if first else 0)
    )


def cohomology_dims(cx: CochainComplex, tolerance: float = 1e-9, exact: bool = False,
                    composition_tolerance: float = 1e-9) -> BettiReport:
    """
    Cohomology dimensions by rank-nullity.

    Args:
        cx: Cochain complex
        tolerance: Singular values at or below tolerance * σ_max count as zero
        exact: Use exact rational elimination on the unscaled Γ matrices
        composition_tolerance: Allowed relative size of D^{q+1} D^q

    Returns:
        BettiReport

    Raises:
        WeightError: if exact ranks are requested without rational data
        NotAComplex: if consecutive differentials do not compose to zero
    """
    if tolerance < 0:
        raise ValueError(f"tolerance must be non-negative, got {tolerance}")
    if exact:
        if cx.exact is None:
            raise WeightError(f"exact ranks need a {cx.kind} complex built from rational weights")
        for q, (first, second) in enumerate(zip(cx.exact, cx.exact[1:])):
            if not _exact_product_is_zero(first, second):
                raise NotAComplex(f"D^{q + 1} D^{q} is not zero")
        ranks = tuple(linalg.rank(m, size) for m, size in zip(cx.exact, cx.sizes))
    else:
        for q, defect in enumerate(composition_defect(cx)):
            if defect > composition_tolerance:
                raise NotAComplex(f"‖D^{q + 1} D^{q}‖ is {defect:.3g} relative to its factors")
        ranks = tuple(_numerical_rank(m, tolerance) for m in cx.matrices)

    dims = []
    for q, size in enumerate(cx.sizes):
        incoming = ranks[q - 1] if q > 0 else 0
        outgoing = ranks[q] if q < len(ranks) else 0
        dims.append(size - incoming - outgoing)
    return BettiReport(tuple(dims), ranks, tolerance, exact)


def linearization_check(sc: StructureConstants, weights: WeightVector, step: float) -> float:
    """
    Compare the derivative of the minimal complex at 0 in direction λ with the Aomoto complex.

    The derivative of -2N sinh(π√-1 t λ_S) at t = 0 is the negative of the Aomoto
    entry, so -minimal(hλ)/h is compared with aomoto(λ); negating every
    differential does not change the complex up to isomorphism.

    Args:
        sc: Structure constants
        weights: Direction λ
        step: Finite-difference step h > 0

    Returns:
        max |(-minimal(hλ)/h) - aomoto(λ)| / (1 + |aomoto(λ)|) over all entries
    """
    if step < 0:
        raise ValueError(f"step must be positive, got {step}")
    epsilon = np.finfo(float).eps
    if step < epsilon:
        logger.warning("finite-difference step %g clamped to %g", step, epsilon)
        step = epsilon

    aomoto = aomoto_complex(sc, weights)
    scaled = minimal_complex(sc, weights.scaled(step))
    error = 0.0
    for target, value in zip(aomoto.matrices, scaled.matrices):
        if target.size == 0:
            continue
        derivative = -value / step
        error = max(error, float(np.max(np.abs(derivative - target) / (1.0 + np.abs(target)))))
    return error


def small_regime_bound(size: int) -> Fraction:
    """Weights below 1/(2(n+1)) in modulus are in the tangent-cone regime."""
    return Fraction(1, 2 * (size + 1))


def tangent_cone_compare(sc: StructureConstants, weights: WeightVector, tolerance: float = 1e-9,
                         exact: Optional[bool] = None) -> TangentConeReport:
    """
    Cohomology of the minimal and Aomoto complexes at the same weights.

    Aomoto ranks are exact whenever the weights are rational unless `exact`
    is set to False.
    """
    bound = small_regime_bound(sc.size)
    in_small_regime = all(abs(v) < bound for v in weights.values)
    use_exact = weights.exact if exact is None else exact
    minimal = cohomology_dims(minimal_complex(sc, weights), tolerance)
    aomoto = cohomology_dims(aomoto_complex(sc, weights), tolerance, exact=use_exact)
    if in_small_regime and minimal.dims != aomoto.dims:
        logger.warning("dimensions differ inside the small-weight regime: %s vs %s",
                       minimal.dims, aomoto.dims)
    return TangentConeReport(minimal, aomoto, in_small_regime)


def write_matrices_csv(cx: CochainComplex, directory: str) -> List[str]:
    """
    Write each D^q to  <directory>/<kind>_d<q>.csv  as interleaved re,im columns.

    Returns:
        Paths written
    """
    os.makedirs(directory, exist_ok=True)
    paths = []
    for q, matrix in enumerate(cx.matrices):
        interleaved = np.empty((matrix.shape[0], 2 * matrix.shape[1]))
        interleaved[:, 0::2] = matrix.real
        interleaved[:, 1::2] = matrix.imag
        path = os.path.join(directory, f"{cx.kind}_d{q}.csv")
        np.savetxt(path, interleaved, delimiter=',', fmt='%.17g')
        paths.append(path)
    return paths
