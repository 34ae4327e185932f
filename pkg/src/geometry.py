"""Hyperplanes, arrangements, generic flags and the intersection poset."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidArrangement, NotGeneric
from .linalg import Vector

logger = logging.getLogger(__name__)

SUBSCRIPTS = str.maketrans('0123456789', '₀₁₂₃₄₅₆₇₈₉')


def as_vector(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def subscript(indices: Sequence[int]) -> str:
    """
    Render 0-based hyperplane indices as a 1-based subscript.

    Single-digit labels are packed together
    (λ₂₃₄); anything larger falls back to an explicit list.
    """
    labels = [i + 1 for i in indices]
    if all(label < 10 for label in labels):
        return ''.join(str(label) for label in labels).translate(SUBSCRIPTS)
    return '_{' + ','.join(str(label) for label in labels) + '}'


@dataclass(frozen=True)
class Hyperplane:
    """Zero set of the affine form  a . x + b."""
    coefficients: Vector
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'coefficients', as_vector(self.coefficients))
        object.__setattr__(self, 'offset', Fraction(self.offset))
        if all(a == 0 for a in self.coefficients):
            raise InvalidArrangement("hyperplane has a zero normal vector")

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        return linalg.dot(self.coefficients, point) + self.offset

    def is_proportional(self, other: 'Hyperplane') -> bool:
        """True iff both forms define the same zero set."""
        a = self.coefficients + (self.offset,)
        b = other.coefficients + (other.offset,)
        if len(a) != len(b):
            return False
        pivot = next(i for i, x in enumerate(a) if x != 0)
        if b[pivot] == 0:
            return False
        ratio = b[pivot] / a[pivot]
        return all(y == ratio * x for x, y in zip(a, b))


@dataclass(frozen=True)
class Arrangement:
    """Ordered list of distinct affine hyperplanes in R^dimension."""
    dimension: int
    hyperplanes: Tuple[Hyperplane, ...]

    def __post_init__(self):
        object.__setattr__(self, 'hyperplanes', tuple(self.hyperplanes))
        if self.dimension < 1:
            raise InvalidArrangement(f"dimension must be positive, got {self.dimension}")
        if not self.hyperplanes:
            raise InvalidArrangement("an arrangement needs at least one hyperplane")
        for i, h in enumerate(self.hyperplanes):
            if h.dimension != self.dimension:
                raise DimensionMismatch(
                    f"hyperplane {i + 1} has {h.dimension} coefficients, expected {self.dimension}")
        for i, j in combinations(range(len(self.hyperplanes)), 2):
            if self.hyperplanes[i].is_proportional(self.hyperplanes[j]):
                raise InvalidArrangement(f"hyperplanes {i + 1} and {j + 1} coincide")

    def __len__(self) -> int:
        return len(self.hyperplanes)

    @property
    def normals(self) -> List[Vector]:
        return [h.coefficients for h in self.hyperplanes]

    def signs_at(self, point: Sequence[Fraction]) -> Tuple[int, ...]:
        return tuple(linalg.sign(h.evaluate(point)) for h in self.hyperplanes)


@dataclass(frozen=True, eq=False)
class Flat:
    """
    A nonempty intersection of hyperplanes.

    `generators` is closed: it lists every hyperplane containing the flat,
    so two flats are equal exactly when their generator sets are.
    The witness is `point` together with a basis `directions` of the
    direction space.
    """
    generators: FrozenSet[int]
    rank: int
    point: Vector
    directions: Tuple[Vector, ...]

    def __eq__(self, other):
        return isinstance(other, Flat) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def label(self) -> str:
        if not self.generators:
            return 'V'
        return '{' + ','.join(str(i + 1) for i in sorted(self.generators)) + '}'


@dataclass(frozen=True)
class IntersectionPoset:
    """Flats graded by rank, the strict order below each flat, and Möbius values."""
    arrangement: Arrangement
    ranks: Tuple[Tuple[Flat, ...], ...]
    below: Dict[Flat, FrozenSet[Flat]]
    mobius: Dict[Flat, int]

    @property
    def ambient(self) -> Flat:
        return self.ranks[0][0]

    def flats(self) -> List[Flat]:
        return [flat for level in self.ranks for flat in level]

    def rank_sizes(self) -> Tuple[int, ...]:
        return tuple(len(level) for level in self.ranks)

    def flat(self, generators) -> Optional[Flat]:
        """Look up a flat by its (closed) generator set."""
        key = frozenset(generators)
        for flat in self.flats():
            if flat.generators == key:
                return flat
        return None


@dataclass(frozen=True)
class BettiVector:
    """Coefficients of the Poincaré polynomial and the beta invariant."""
    coefficients: Tuple[int, ...]
    beta: int

    def poincare(self, t):
        return sum(b * t ** i for i, b in enumerate(self.coefficients))

    @property
    def euler_characteristic(self) -> int:
        return self.poincare(-1)

    @property
    def total(self) -> int:
        return self.poincare(1)

    def truncated(self, q: int) -> Tuple[int, ...]:
        return self.coefficients[:q + 1]

    def format_polynomial(self) -> str:
        terms = []
        for i, b in enumerate(self.coefficients):
            if b == 0:
                continue
            terms.append(str(b) if i == 0 else f"{b}t" if i == 1 else f"{b}t^{i}")
        return ' + '.join(terms) if terms else '0'


@dataclass(frozen=True)
class Flag:
    """
    Complete affine flag  F^q = basepoint + span(directions[:q]).

    The ordered directions also fix the orientation of every F^q.
    """
    basepoint: Vector
    directions: Tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, 'basepoint', as_vector(self.basepoint))
        object.__setattr__(self, 'directions', tuple(as_vector(v) for v in self.directions))
        dimension = len(self.basepoint)
        if len(self.directions) != dimension or any(len(v) != dimension for v in self.directions):
            raise DimensionMismatch(f"a flag in R^{dimension} needs {dimension} directions "
                                    f"of length {dimension}")
        if linalg.rank(self.directions, dimension) != dimension:
            raise NotGeneric("flag directions are linearly dependent")

    @property
    def dimension(self) -> int:
        return len(self.basepoint)

    def frame(self, q: int) -> Tuple[Vector, ...]:
        return self.directions[:q]

    def point(self, coordinates: Sequence[Fraction]) -> Vector:
        """Point of F^q with the given flag coordinates (q = len(coordinates))."""
        result = list(self.basepoint)
        for t, v in zip(coordinates, self.directions):
            result = [x + t * y for x, y in zip(result, v)]
        return tuple(result)


def _meet(flat: Flat, hyperplane: Hyperplane) -> Optional[Tuple[Vector, Tuple[Vector, ...]]]:
    """Witness of flat ∩ hyperplane, or None when they are parallel and disjoint."""
    slopes = [linalg.dot(hyperplane.coefficients, d) for d in flat.directions]
    value = hyperplane.evaluate(flat.point)
    pivot = next((j for j, s in enumerate(slopes) if s != 0), None)
    if pivot is None:
        return None

    d_pivot = flat.directions[pivot]
    step = value / slopes[pivot]
    point = tuple(x - step * y for x, y in zip(flat.point, d_pivot))
    directions = tuple(
        tuple(x - (slopes[m] / slopes[pivot]) * y for x, y in zip(d, d_pivot))
        for m, d in enumerate(flat.directions) if m != pivot
    )
    return point, directions


def _closure(arrangement: Arrangement, point: Vector, directions: Tuple[Vector, ...]) -> FrozenSet[int]:
    return frozenset(
        k for k, h in enumerate(arrangement.hyperplanes)
        if h.evaluate(point) == 0 and all(linalg.dot(h.coefficients, d) == 0 for d in directions)
    )


def build_poset(arrangement: Arrangement) -> IntersectionPoset:
    """
    Build the intersection poset rank by rank.

    Each flat of rank p is intersected with every hyperplane not containing it;
    the results are deduplicated by their closed generator sets.

    Args:
        arrangement: Arrangement to analyse

    Returns:
        IntersectionPoset with order relation and Möbius function
    """
    ell = arrangement.dimension
    identity = tuple(tuple(Fraction(int(i == j)) for j in range(ell)) for i in range(ell))
    ambient = Flat(frozenset(), 0, (Fraction(0),) * ell, identity)

    levels: List[List[Flat]] = [[ambient]]
    for p in range(ell):
        found: Dict[FrozenSet[int], Flat] = {}
        for flat in levels[p]:
            for i, hyperplane in enumerate(arrangement.hyperplanes):
                if i in flat.generators:
                    continue
                meet = _meet(flat, hyperplane)
                if meet is None:
                    continue
                point, directions = meet
                generators = _closure(arrangement, point, directions)
                if generators not in found:
                    found[generators] = Flat(generators, p + 1, point, directions)
        if not found:
            break
        levels.append(sorted(found.values(), key=lambda f: sorted(f.generators)))

    flats = [flat for level in levels for flat in level]
    below = {
        x: frozenset(y for y in flats if y.generators < x.generators)
        for x in flats
    }
    mobius: Dict[Flat, int] = {}
    for x in flats:  # rank order, so everything below x is already known
        mobius[x] = 1 if x is ambient else -sum(mobius[y] for y in below[x])

    logger.debug("poset rank sizes %s", [len(level) for level in levels])
    return IntersectionPoset(arrangement, tuple(tuple(level) for level in levels), below, mobius)


def betti_vector(poset: IntersectionPoset) -> BettiVector:
    """
    Expand  π(A, t) = Σ μ(X) (-t)^{r(X)}  by rank.

    Args:
        poset: Intersection poset

    Returns:
        BettiVector of length dimension + 1 and β = |π(A, -1)|
    """
    ell = poset.arrangement.dimension
    coefficients = [0] * (ell + 1)
    for flat, value in poset.mobius.items():
        coefficients[flat.rank] += value * (-1) ** flat.rank
    euler = sum((-1) ** i * b for i, b in enumerate(coefficients))
    return BettiVector(tuple(coefficients), abs(euler))


def is_essential(arrangement: Arrangement) -> bool:
    """True iff the normals span R^dimension, i.e. some flat has full rank."""
    return linalg.rank(arrangement.normals, arrangement.dimension) == arrangement.dimension


def check_genericity(arrangement: Arrangement, flag: Flag, q: int,
                     poset: Optional[IntersectionPoset] = None) -> bool:
    """
    Test whether F^q meets every flat in the expected dimension.

    A flat X of rank r <= q must satisfy dim(F^q ∩ X) = q - r; a flat of rank
    r > q must miss F^q entirely.

    Args:
        arrangement: Arrangement the flag is tested against
        flag: Flag providing F^q
        q: Dimension of the flag member, 0 <= q <= dimension
        poset: Precomputed poset of the arrangement (built if omitted)

    Returns:
        True when F^q is generic
    """
    ell = arrangement.dimension
    if not 0 <= q <= ell:
        raise ValueError(f"q must lie in 0..{ell}, got {q}")
    if flag.dimension != ell:
        raise DimensionMismatch(f"flag lives in R^{flag.dimension}, arrangement in R^{ell}")
    if poset is None:
        poset = build_poset(arrangement)

    frame = list(flag.frame(q))
    for flat in poset.flats():
        if flat.rank == 0:
            continue
        span = frame + list(flat.directions)
        span_rank = linalg.rank(span, ell)
        if flat.rank <= q:
            # dim(F^q ∩ X) = q + dim X - rank(span) whenever the span is everything
            if span_rank != ell:
                return False
        else:
            offset = tuple(x - y for x, y in zip(flat.point, flag.basepoint))
            if linalg.rank(span + [offset], ell) == span_rank:
                return False
    return True


def restrict(arrangement: Arrangement, flag: Flag, q: int,
             poset: Optional[IntersectionPoset] = None) -> Arrangement:
    """
    Restrict the arrangement to F^q in the flag coordinates t_1..t_q.

    Args:
        arrangement: Arrangement to restrict
        flag: Flag with x = basepoint + Σ t_i v_i
        q: Dimension of the section, 1 <= q <= dimension
        poset: Precomputed poset (built if omitted)

    Returns:
        Arrangement of the n hyperplanes H ∩ F^q, in the original order

    Raises:
        NotGeneric: if F^q is not generic or two sections coincide
    """
    ell = arrangement.dimension
    if not 1 <= q <= ell:
        raise ValueError(f"restriction needs 1 <= q <= {ell}, got {q}")
    if not check_genericity(arrangement, flag, q, poset):
        raise NotGeneric(f"F^{q} is not generic for this arrangement")

    frame = flag.frame(q)
    sections = []
    for i, h in enumerate(arrangement.hyperplanes):
        coefficients = [linalg.dot(h.coefficients, v) for v in frame]
        if all(c == 0 for c in coefficients):
            raise NotGeneric(f"hyperplane {i + 1} does not meet F^{q} transversally")
        sections.append(Hyperplane(coefficients, h.evaluate(flag.basepoint)))
    try:
        return Arrangement(q, sections)
    except InvalidArrangement as e:
        raise NotGeneric(f"sections by F^{q} coincide: {e}") from e


def random_arrangement(dimension: int, size: int, seed: int, bound: int = 3) -> Arrangement:
    """
    Sample an essential arrangement with small integer data.

    Small coefficients make parallel pairs and multiple points common,
    which is what the property tests want to exercise.

    Args:
        dimension: Ambient dimension
        size: Number of hyperplanes (at least `dimension`)
        seed: Seed for numpy's default generator
        bound: Coefficients are drawn from [-bound, bound]

    Returns:
        Essential Arrangement
    """
    if size < dimension:
        raise ValueError(f"an essential arrangement in R^{dimension} needs at least {dimension} hyperplanes")
    rng = np.random.default_rng(seed)

    for _ in range(1000):
        hyperplanes: List[Hyperplane] = []
        draws = 0
        while len(hyperplanes) < size and draws < 100 * size:
            draws += 1
            coefficients = [int(x) for x in rng.integers(-bound, bound + 1, size=dimension)]
            if not any(coefficients):
                continue
            candidate = Hyperplane(coefficients, int(rng.integers(-2 * bound, 2 * bound + 1)))
            if any(candidate.is_proportional(h) for h in hyperplanes):
                continue
            hyperplanes.append(candidate)
        if len(hyperplanes) < size:
            continue
        arrangement = Arrangement(dimension, hyperplanes)
        if is_essential(arrangement):
            return arrangement
    raise RuntimeError(f"could not sample {size} distinct hyperplanes in R^{dimension}")
