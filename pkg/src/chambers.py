"""Chamber enumeration, flag stratification, sgn and separating sets."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import FlagSearchExhausted, NonEssential, NotGeneric, StratumMismatch
from .geometry import (Arrangement, Flag, IntersectionPoset, betti_vector, build_poset,
                       check_genericity, is_essential)
from .linalg import Vector

logger = logging.getLogger(__name__)

SignVector = Tuple[int, ...]


def format_signs(signs: Sequence[int]) -> str:
    return ''.join('+' if s > 0 else '-' for s in signs)


def parse_signs(text: str) -> SignVector:
    return tuple(1 if c == '+' else -1 for c in text)


@dataclass(frozen=True, eq=False)
class Chamber:
    """A chamber, identified by the signs of the defining forms on its interior."""
    sign_vector: SignVector
    witness: Vector
    bounded: bool

    def __eq__(self, other):
        return isinstance(other, Chamber) and self.sign_vector == other.sign_vector

    def __hash__(self):
        return hash(self.sign_vector)

    @property
    def label(self) -> str:
        return format_signs(self.sign_vector)


@dataclass(frozen=True)
class Stratification:
    """
    Chambers grouped by the first flag member they meet.

    strata[q] is ch^q ordered by sign vector; sgn[C] is the side of F^{q-1}
    inside F^q on which C ∩ F^q lies; sections[C] is a point of C ∩ F^q
    in flag coordinates.
    """
    arrangement: Arrangement
    flag: Flag
    strata: Tuple[Tuple[Chamber, ...], ...]
    sgn: Dict[Chamber, int]
    sections: Dict[Chamber, Vector]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(stratum) for stratum in self.strata)

    def degree(self, chamber: Chamber) -> int:
        for q, stratum in enumerate(self.strata):
            if chamber in stratum:
                return q
        raise KeyError(f"chamber {chamber.label} is not in this stratification")

    def position(self, chamber: Chamber) -> int:
        return self.strata[self.degree(chamber)].index(chamber)

    def chambers(self) -> List[Chamber]:
        return [c for stratum in self.strata for c in stratum]


def _oriented_system(arrangement: Arrangement, signs: SignVector, count: Optional[int] = None):
    """Normals and offsets of  s_i (a_i . x + b_i) > 0  for the first `count` hyperplanes."""
    hyperplanes = arrangement.hyperplanes[:count] if count is not None else arrangement.hyperplanes
    normals = [tuple(s * a for a in h.coefficients) for s, h in zip(signs, hyperplanes)]
    offsets = [s * h.offset for s, h in zip(signs, hyperplanes)]
    return normals, offsets


def _flag_system(arrangement: Arrangement, flag: Flag, signs: SignVector, q: int):
    """The chamber inequalities pulled back to the coordinates t_1..t_q of F^q."""
    frame = flag.frame(q)
    normals, offsets = [], []
    for s, h in zip(signs, arrangement.hyperplanes):
        normals.append(tuple(s * linalg.dot(h.coefficients, v) for v in frame))
        offsets.append(s * h.evaluate(flag.basepoint))
    return normals, offsets


def is_bounded(arrangement: Arrangement, signs: SignVector) -> bool:
    """True iff the recession cone {d : s_i a_i . d >= 0} is {0}."""
    normals, _ = _oriented_system(arrangement, signs)
    return linalg.only_trivial_solution(normals, arrangement.dimension)


def enumerate_chambers(arrangement: Arrangement) -> List[Chamber]:
    """
    Enumerate chambers by inserting hyperplanes one at a time.

    Each cell of the partial arrangement is split by the next hyperplane.
    The side containing the current witness needs no test; the other side
    gets an exact strict-feasibility program.

    Args:
        arrangement: Essential arrangement

    Returns:
        List of Chamber sorted by sign vector

    Raises:
        NonEssential: if no flat has full rank
    """
    if not is_essential(arrangement):
        raise NonEssential("arrangement is not essential: the normals do not span "
                           f"R^{arrangement.dimension}")

    ell = arrangement.dimension
    cells: List[Tuple[SignVector, Vector]] = [((), (Fraction(0),) * ell)]
    for k, hyperplane in enumerate(arrangement.hyperplanes):
        split = []
        for signs, witness in cells:
            value = hyperplane.evaluate(witness)
            for side in (1, -1):
                extended = signs + (side,)
                if value * side > 0:
                    split.append((extended, witness))
                    continue
                normals, offsets = _oriented_system(arrangement, extended, k + 1)
                point = linalg.strict_point(normals, offsets, ell)
                if point is not None:
                    split.append((extended, point))
        cells = split
        logger.debug("after hyperplane %d: %d cells", k + 1, len(cells))

    chambers = [Chamber(signs, witness, is_bounded(arrangement, signs)) for signs, witness in cells]
    chambers.sort(key=lambda c: c.sign_vector)
    logger.info("%d chambers, %d bounded", len(chambers), sum(c.bounded for c in chambers))
    return chambers


def brute_force_sign_vectors(arrangement: Arrangement) -> List[SignVector]:
    """Every realizable sign vector, found by testing all 2^n candidates."""
    found = []
    for signs in product((1, -1), repeat=len(arrangement)):
        normals, offsets = _oriented_system(arrangement, signs)
        if linalg.strict_point(normals, offsets, arrangement.dimension) is not None:
            found.append(signs)
    return sorted(found)


def separating_set(first: Chamber, second: Chamber) -> FrozenSet[int]:
    """0-based indices of the hyperplanes whose sides differ."""
    return frozenset(i for i, (a, b) in enumerate(zip(first.sign_vector, second.sign_vector)) if a != b)


def stratify(arrangement: Arrangement, chambers: Sequence[Chamber], flag: Flag,
             poset: Optional[IntersectionPoset] = None) -> Stratification:
    """
    Assign every chamber to the smallest q with C ∩ F^q nonempty.

    Args:
        arrangement: Arrangement the chambers belong to
        chambers: Output of enumerate_chambers
        flag: Flag, generic in every dimension
        poset: Precomputed poset (built if omitted)

    Returns:
        Stratification with sgn and section points

    Raises:
        NotGeneric: if some F^q fails check_genericity
        StratumMismatch: if a stratum size differs from its Betti number
    """
    ell = arrangement.dimension
    if poset is None:
        poset = build_poset(arrangement)
    for q in range(ell + 1):
        if not check_genericity(arrangement, flag, q, poset):
            raise NotGeneric(f"F^{q} is not generic for this arrangement")

    strata: List[List[Chamber]] = [[] for _ in range(ell + 1)]
    sgn: Dict[Chamber, int] = {}
    sections: Dict[Chamber, Vector] = {}
    for chamber in chambers:
        for q in range(ell + 1):
            normals, offsets = _flag_system(arrangement, flag, chamber.sign_vector, q)
            point = linalg.strict_point(normals, offsets, q)
            if point is not None:
                break
        else:
            raise StratumMismatch(f"chamber {chamber.label} does not meet F^{ell}")
        strata[q].append(chamber)
        sections[chamber] = point
        # ch^0 has a single chamber; its sign is +1 by convention
        sgn[chamber] = 1 if q == 0 else linalg.sign(point[q - 1])
        if sgn[chamber] == 0:
            raise NotGeneric(f"chamber {chamber.label} meets F^{q - 1}")

    betti = betti_vector(poset).coefficients
    sizes = tuple(len(s) for s in strata)
    if sizes != betti:
        raise StratumMismatch(f"strata sizes {sizes} differ from Betti numbers {betti}")

    for stratum in strata:
        stratum.sort(key=lambda c: c.sign_vector)
    logger.debug("strata sizes %s", sizes)
    return Stratification(arrangement, flag, tuple(tuple(s) for s in strata), sgn, sections)


def _sample_flag(rng: np.random.Generator, dimension: int) -> Optional[Flag]:
    basepoint = [Fraction(int(rng.integers(-60, 61)), int(rng.integers(1, 8))) for _ in range(dimension)]
    directions = [[int(x) for x in rng.integers(-9, 10, size=dimension)] for _ in range(dimension)]
    if linalg.rank(directions, dimension) < dimension:
        return None
    return Flag(basepoint, directions)


def random_generic_flag(arrangement: Arrangement, seed: int, candidate: Optional[Flag] = None,
                        attempts: int = 200, poset: Optional[IntersectionPoset] = None,
                        chambers: Optional[Sequence[Chamber]] = None) -> Flag:
    """
    Return a flag that is generic in every dimension and stratifies correctly.

    A usable `candidate` is returned as is; otherwise flags with small rational
    coordinates are drawn from numpy's generator seeded with `seed`.

    Args:
        arrangement: Essential arrangement
        seed: Random seed
        candidate: Flag to try first
        attempts: Number of random flags to try
        poset: Precomputed poset
        chambers: Precomputed chambers

    Returns:
        Flag

    Raises:
        FlagSearchExhausted: if no attempt succeeds
    """
    if poset is None:
        poset = build_poset(arrangement)
    if chambers is None:
        chambers = enumerate_chambers(arrangement)

    def usable(flag: Flag) -> bool:
        try:
            stratify(arrangement, chambers, flag, poset)
        except (NotGeneric, StratumMismatch):
            return False
        return True

    if candidate is not None and usable(candidate):
        return candidate

    rng = np.random.default_rng(seed)
    for attempt in range(attempts):
        flag = _sample_flag(rng, arrangement.dimension)
        if flag is not None and usable(flag):
            logger.debug("generic flag found after %d attempts", attempt + 1)
            return flag
    raise FlagSearchExhausted(f"no generic flag found in {attempts} attempts (seed {seed})")
