"""
The chamber basis of the Orlik-Solomon algebra.

Degree-q cohomology is identified with formal combinations of chambers in
the flag stratum ch^q.  `ChamberBasis.xi` sends wedge monomials to chamber
vectors, `ChamberBasis.nu` inverts it, and `structure_constants` records
left multiplication by ω_λ in the chamber basis.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .chambers import Chamber, Stratification, SignVector, format_signs, separating_set
from .errors import DegreeMismatch, Dependent, FactorizationFailure, NotGeneric, Unsolvable
from .geometry import Arrangement, Flag, subscript

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Monomial:
    """ω_I for a strictly increasing tuple I of 0-based indices."""
    indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(int(i) for i in self.indices))
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"monomial indices must be strictly increasing, got {self.indices}")

    @property
    def degree(self) -> int:
        return len(self.indices)

    @classmethod
    def normalize(cls, indices: Sequence[int]) -> Tuple[int, Optional['Monomial']]:
        """
        Sort an index word.

        Returns:
            (sign of the sorting permutation, monomial), or (0, None) if an index repeats
        """
        indices = tuple(indices)
        if len(set(indices)) != len(indices):
            return 0, None
        inversions = sum(1 for a, b in combinations(indices, 2) if a > b)
        return (-1) ** inversions, cls(tuple(sorted(indices)))

    def __str__(self):
        return 'ω' + subscript(self.indices) if self.indices else '1'


@dataclass(frozen=True)
class MonomialSum:
    """A formal rational combination of degree-q monomials."""
    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for monomial, coefficient in self.terms.items():
            if monomial.degree != self.degree:
                raise DegreeMismatch(f"{monomial} does not have degree {self.degree}")
            coefficient = Fraction(coefficient)
            if coefficient != 0:
                cleaned[monomial] = coefficient
        object.__setattr__(self, 'terms', dict(sorted(cleaned.items())))

    @classmethod
    def unit(cls) -> 'MonomialSum':
        return cls(0, {Monomial(()): Fraction(1)})

    @classmethod
    def from_word(cls, indices: Sequence[int], coefficient=1) -> 'MonomialSum':
        """ω_{i_1} ∧ ... ∧ ω_{i_q} for an arbitrary index word."""
        sign, monomial = Monomial.normalize(indices)
        if monomial is None:
            return cls(len(indices))
        return cls(monomial.degree, {monomial: sign * Fraction(coefficient)})

    def _check(self, other: 'MonomialSum') -> None:
        if other.degree != self.degree:
            raise DegreeMismatch(f"cannot combine degree {self.degree} with degree {other.degree}")

    def __add__(self, other: 'MonomialSum') -> 'MonomialSum':
        self._check(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
        return MonomialSum(self.degree, terms)

    def __neg__(self) -> 'MonomialSum':
        return self.scale(-1)

    def __sub__(self, other: 'MonomialSum') -> 'MonomialSum':
        return self + (-other)

    def scale(self, factor) -> 'MonomialSum':
        return MonomialSum(self.degree, {m: c * Fraction(factor) for m, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def __str__(self):
        return format_combination((str(m), c) for m, c in self.terms.items())


def format_combination(terms) -> str:
    """Render  (label, coefficient)  pairs as  'a - 2b + c'."""
    parts = []
    for label, coefficient in terms:
        magnitude = abs(coefficient)
        text = label if magnitude == 1 else f"{magnitude}{label}"
        if not parts:
            parts.append(text if coefficient > 0 else f"-{text}")
        else:
            parts.append(f"{'+' if coefficient > 0 else '-'} {text}")
    return ' '.join(parts) if parts else '0'


@dataclass(frozen=True)
class ChamberVector:
    """Rational coefficients on the ordered stratum ch^q."""
    degree: int
    coefficients: Tuple[Fraction, ...]

    def __add__(self, other: 'ChamberVector') -> 'ChamberVector':
        if other.degree != self.degree:
            raise DegreeMismatch(f"cannot add degree {self.degree} and degree {other.degree}")
        return ChamberVector(self.degree, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, factor) -> 'ChamberVector':
        return ChamberVector(self.degree, tuple(c * Fraction(factor) for c in self.coefficients))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


@dataclass(frozen=True)
class LinearForm:
    """Σ c_i λ_i over formal weights."""
    coefficients: Tuple[Fraction, ...]

    @classmethod
    def indicator(cls, indices, size: int) -> 'LinearForm':
        return cls(tuple(Fraction(int(i in indices)) for i in range(size)))

    def evaluate(self, weights: Sequence):
        return sum(c * w for c, w in zip(self.coefficients, weights))

    def factor(self, indices: FrozenSet[int]) -> Optional[Fraction]:
        """N with  self = N · λ_S, or None if the form is not of that shape."""
        if any(c != 0 for i, c in enumerate(self.coefficients) if i not in indices):
            return None
        values = {self.coefficients[i] for i in indices}
        if len(values) > 1:
            return None
        return values.pop() if values else Fraction(0)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)


def shorthand(multiplicity: int, indices) -> str:
    """N · λ_S in the packed notation, e.g.  -λ₂₃₄."""
    form = 'λ' + subscript(sorted(indices))
    if multiplicity == 1:
        return form
    if multiplicity == -1:
        return '-' + form
    return f"{multiplicity}{form}"


@dataclass(frozen=True)
class ConstantEntry:
    """Γ_{C,C'} = multiplicity · λ_S  for C in ch^q and C' in ch^{q+1}."""
    degree: int
    source: Chamber
    target: Chamber
    multiplicity: int
    separating: FrozenSet[int]
    gamma: LinearForm

    def __str__(self):
        return shorthand(self.multiplicity, self.separating)


@dataclass(frozen=True)
class StructureConstants:
    """Nonzero Γ entries; pairs with N = 0 are implicit."""
    stratification: Stratification
    entries: Tuple[ConstantEntry, ...]

    @property
    def size(self) -> int:
        return len(self.stratification.arrangement)

    @property
    def dimension(self) -> int:
        return self.stratification.arrangement.dimension

    def degree_entries(self, q: int) -> List[ConstantEntry]:
        return [e for e in self.entries if e.degree == q]

    def lookup(self, source: Chamber, target: Chamber) -> Optional[ConstantEntry]:
        for entry in self.entries:
            if entry.source == source and entry.target == target:
                return entry
        return None

    def multiplicity_matrix(self, q: int) -> List[List[int]]:
        """b_{q+1} x b_q integer matrix of N, rows indexed by ch^{q+1}."""
        strata = self.stratification.strata
        rows = {c: i for i, c in enumerate(strata[q + 1])}
        cols = {c: j for j, c in enumerate(strata[q])}
        matrix = [[0] * len(strata[q]) for _ in strata[q + 1]]
        for entry in self.degree_entries(q):
            matrix[rows[entry.target]][cols[entry.source]] = entry.multiplicity
        return matrix

    def gamma_matrix(self, q: int, weights: Sequence) -> List[List]:
        """Γ^q evaluated at the given weights, rows indexed by ch^{q+1}."""
        strata = self.stratification.strata
        rows = {c: i for i, c in enumerate(strata[q + 1])}
        cols = {c: j for j, c in enumerate(strata[q])}
        matrix = [[0] * len(strata[q]) for _ in strata[q + 1]]
        for entry in self.degree_entries(q):
            matrix[rows[entry.target]][cols[entry.source]] = entry.gamma.evaluate(weights)
        return matrix


def _section(arrangement: Arrangement, flag: Flag, indices: Sequence[int]):
    """Rows a_i . v_k and values α_i(F^0) of the hyperplanes in `indices`, inside F^q."""
    frame = flag.frame(len(indices))
    rows = [[linalg.dot(arrangement.hyperplanes[i].coefficients, v) for v in frame] for i in indices]
    values = [arrangement.hyperplanes[i].evaluate(flag.basepoint) for i in indices]
    return rows, values


def c_zero(arrangement: Arrangement, flag: Flag, indices: Sequence[int]) -> SignVector:
    """
    Signs on `indices` of the chamber of the q-hyperplane subarrangement in F^q
    that misses F^{q-1}.

    The q sections meet in one point P of F^q.  Near P the chambers are the
    2^q orthants  C x = -d + s;  the one missing {t_q = 0} has every
    s_k (C^{-1})_{q,k} of the sign of P_q.

    Raises:
        Dependent: if the sections are linearly dependent in F^q
        NotGeneric: if P lies on F^{q-1} or some section is parallel to v_q
    """
    q = len(indices)
    if q == 0:
        return ()
    rows, values = _section(arrangement, flag, indices)
    inverse = linalg.inverse(rows)
    if inverse is None:
        raise Dependent(f"hyperplanes {[i + 1 for i in indices]} are dependent in F^{q}")
    point = [-linalg.dot(row, values) for row in inverse]
    height, last = point[q - 1], inverse[q - 1]
    if height == 0 or any(r == 0 for r in last):
        raise NotGeneric(f"F^{q - 1} is not generic for hyperplanes {[i + 1 for i in indices]}")
    return tuple(linalg.sign(height * r) for r in last)


def epsilon(arrangement: Arrangement, flag: Flag, indices: Sequence[int]) -> int:
    """
    Orientation sign ε(I) of the inward normals toward C₀(I) in the frame (v_1..v_q).

    The inward normal of the k-th section is s_k times its row, so
    ε = sign(det C) · Π s_k; dependent or repeated tuples give 0.
    """
    indices = tuple(indices)
    if not indices:
        return 1
    if len(set(indices)) != len(indices):
        return 0
    rows, _ = _section(arrangement, flag, indices)
    determinant = linalg.determinant(rows)
    if determinant == 0:
        return 0
    result = linalg.sign(determinant)
    for s in c_zero(arrangement, flag, indices):
        result *= s
    return result


def wedge(index: int, m: MonomialSum) -> MonomialSum:
    """ω_index ∧ m, normalized; terms already containing the index vanish."""
    terms: Dict[Monomial, Fraction] = {}
    for monomial, coefficient in m.terms.items():
        if index in monomial.indices:
            continue
        position = sum(1 for j in monomial.indices if j < index)
        product = Monomial(tuple(sorted(monomial.indices + (index,))))
        terms[product] = terms.get(product, Fraction(0)) + (-1) ** position * coefficient
    return MonomialSum(m.degree + 1, terms)


class ChamberBasis:
    """
    ξ and ν for one stratification.

    ξ(ω_I) = ε(I) · Σ [C], over C in ch^q whose signs on I agree with C₀(I).
    ν(C) solves ξ(m) = [C] over the independent q-tuples; columns are taken
    in lexicographic order and the solution is supported on the pivot
    columns of the reduced ξ matrix.
    """

    def __init__(self, stratification: Stratification):
        self.stratification = stratification
        self.arrangement = stratification.arrangement
        self.flag = stratification.flag
        self._words: Dict[Tuple[int, ...], ChamberVector] = {}
        self._tables: Dict[int, Tuple[Tuple[Monomial, ...], List[List[Fraction]]]] = {}
        self._nu: Dict[Chamber, MonomialSum] = {}

    def _check_degree(self, q: int) -> None:
        if not 0 <= q <= self.arrangement.dimension:
            raise DegreeMismatch(f"degree {q} is outside 0..{self.arrangement.dimension}")

    def xi_word(self, indices: Sequence[int]) -> ChamberVector:
        """ξ of ω_{i_1} ∧ ... ∧ ω_{i_q} for an ordered word, straight from ε and C₀."""
        indices = tuple(indices)
        q = len(indices)
        self._check_degree(q)
        if indices in self._words:
            return self._words[indices]

        stratum = self.stratification.strata[q]
        sign = epsilon(self.arrangement, self.flag, indices)
        if sign == 0:
            vector = ChamberVector(q, (Fraction(0),) * len(stratum))
        else:
            far = c_zero(self.arrangement, self.flag, indices)
            vector = ChamberVector(q, tuple(
                Fraction(sign) if all(c.sign_vector[i] == s for i, s in zip(indices, far)) else Fraction(0)
                for c in stratum))
        self._words[indices] = vector
        return vector

    def xi(self, m: MonomialSum, degree: Optional[int] = None) -> ChamberVector:
        """
        Apply ξ^q to a monomial sum.

        Args:
            m: Degree-q monomial sum
            degree: Expected degree, checked when given

        Raises:
            DegreeMismatch: on a degree outside 0..dimension or different from `degree`
        """
        if degree is not None and m.degree != degree:
            raise DegreeMismatch(f"expected degree {degree}, got {m.degree}")
        self._check_degree(m.degree)
        total = ChamberVector(m.degree, (Fraction(0),) * len(self.stratification.strata[m.degree]))
        for monomial, coefficient in m.terms.items():
            total = total + self.xi_word(monomial.indices).scale(coefficient)
        return total

    def independent_tuples(self, q: int) -> Tuple[Monomial, ...]:
        return self.xi_table(q)[0]

    def xi_table(self, q: int) -> Tuple[Tuple[Monomial, ...], List[List[Fraction]]]:
        """Columns (independent q-tuples, lexicographic) and the ξ matrix, rows = ch^q."""
        self._check_degree(q)
        if q not in self._tables:
            columns = []
            for indices in combinations(range(len(self.arrangement)), q):
                rows, _ = _section(self.arrangement, self.flag, indices)
                if linalg.determinant(rows) != 0:
                    columns.append(Monomial(indices))
            vectors = [self.xi_word(m.indices).coefficients for m in columns]
            size = len(self.stratification.strata[q])
            matrix = [[vectors[j][i] for j in range(len(columns))] for i in range(size)]
            self._tables[q] = (tuple(columns), matrix)
        return self._tables[q]

    def _solve(self, q: int) -> None:
        stratum = self.stratification.strata[q]
        if not stratum:
            return
        columns, matrix = self.xi_table(q)
        _, pivots = linalg.rref(matrix, len(columns))
        if len(pivots) != len(stratum):
            raise Unsolvable(f"ξ^{q} has rank {len(pivots)}, expected {len(stratum)}")
        square = [[row[c] for c in pivots] for row in matrix]
        inverse = linalg.inverse(square)
        if inverse is None:
            raise Unsolvable(f"pivot block of ξ^{q} is singular")
        for k, chamber in enumerate(stratum):
            self._nu[chamber] = MonomialSum(
                q, {columns[c]: inverse[j][k] for j, c in enumerate(pivots)})
        logger.debug("solved ν in degree %d on pivots %s", q, [str(columns[c]) for c in pivots])

    def nu(self, chamber: Chamber) -> MonomialSum:
        """The chamber basis element ν(C), with ξ(ν(C)) = [C]."""
        if chamber not in self._nu:
            self._solve(self.stratification.degree(chamber))
        return self._nu[chamber]

    @property
    def integral(self) -> bool:
        """Whether every ν(C) has integer coefficients."""
        return all(self.nu(c).integral for c in self.stratification.chambers())

    def unit_vector(self, chamber: Chamber) -> ChamberVector:
        q = self.stratification.degree(chamber)
        return ChamberVector(q, tuple(Fraction(int(c == chamber)) for c in self.stratification.strata[q]))


def gamma_row(basis: ChamberBasis, chamber: Chamber,
              representative: Optional[MonomialSum] = None) -> Dict[Chamber, LinearForm]:
    """
    Γ_{C,C'} for every C' in the next stratum, from ξ(ω_i ∧ ν(C)).

    Args:
        basis: Chamber basis
        chamber: C in ch^q with q < dimension
        representative: Any monomial sum with ξ = [C]; defaults to ν(C)

    Returns:
        Map from each C' in ch^{q+1} to its linear form in λ
    """
    q = basis.stratification.degree(chamber)
    representative = representative if representative is not None else basis.nu(chamber)
    targets = basis.stratification.strata[q + 1]
    n = len(basis.arrangement)
    columns = [[Fraction(0)] * n for _ in targets]
    for i in range(n):
        image = basis.xi(wedge(i, representative))
        for k, value in enumerate(image.coefficients):
            columns[k][i] = value
    return {target: LinearForm(tuple(column)) for target, column in zip(targets, columns)}


def structure_constants(basis: ChamberBasis) -> StructureConstants:
    """
    Factor every Γ_{C,C'} as N · λ_{S(C,C')}.

    Raises:
        FactorizationFailure: if some Γ is not an integer multiple of its separating form
    """
    strata = basis.stratification.strata
    entries = []
    for q in range(basis.arrangement.dimension):
        for chamber in strata[q]:
            for target, form in gamma_row(basis, chamber).items():
                separating = separating_set(chamber, target)
                multiplicity = form.factor(separating)
                if multiplicity is None or multiplicity.denominator != 1:
                    raise FactorizationFailure(
                        f"Γ({chamber.label}, {target.label}) = {form.coefficients} is not an "
                        f"integer multiple of λ over {sorted(i + 1 for i in separating)}")
                if multiplicity != 0:
                    entries.append(ConstantEntry(q, chamber, target, int(multiplicity), separating, form))
    logger.info("%d nonzero structure constants", len(entries))
    return StructureConstants(basis.stratification, tuple(entries))


def os_relations(basis: ChamberBasis, q: int) -> Iterator[MonomialSum]:
    """
    Orlik-Solomon relation elements of degree q.

    These are the boundaries Σ_k (-1)^k ω_{J - j_k} of dependent (q+1)-tuples J
    whose hyperplanes meet, and the monomials ω_J of q-tuples whose hyperplanes
    have empty intersection.
    """
    arrangement = basis.arrangement
    ell = arrangement.dimension
    n = len(arrangement)

    def consistent(indices) -> bool:
        normals = [arrangement.hyperplanes[i].coefficients for i in indices]
        rhs = [-arrangement.hyperplanes[i].offset for i in indices]
        return linalg.is_consistent(normals, rhs, ell)

    if q + 1 <= n:
        for indices in combinations(range(n), q + 1):
            normals = [arrangement.hyperplanes[i].coefficients for i in indices]
            if linalg.rank(normals, ell) < q + 1 and consistent(indices):
                boundary = MonomialSum(q)
                for k in range(q + 1):
                    face = indices[:k] + indices[k + 1:]
                    boundary = boundary + MonomialSum(q, {Monomial(face): Fraction((-1) ** k)})
                yield boundary
    for indices in combinations(range(n), q):
        if not consistent(indices):
            yield MonomialSum(q, {Monomial(indices): Fraction(1)})


def degree_map(constants: StructureConstants) -> Dict[Tuple[Chamber, Chamber], int]:
    """deg(C', C) = -sgn(C') · N_{C,C'}, keyed by (C', C)."""
    sgn = constants.stratification.sgn
    return {(e.target, e.source): -sgn[e.target] * e.multiplicity for e in constants.entries}


def flatness_defect(constants: StructureConstants) -> List[Tuple[int, Chamber, Chamber]]:
    """
    Pairs (C, C'') whose composed Γ coefficient is not identically zero in λ.

    The coefficient of [C''] in Γ^{q+1} Γ^q [C] is the quadratic form
    Σ_{C'} N N' λ_{S(C',C'')} λ_{S(C,C')}; it vanishes iff its symmetrized
    coefficient matrix does.
    """
    n = constants.size
    strata = constants.stratification.strata
    defects = []
    for q in range(constants.dimension - 1):
        first = {(e.source, e.target): e for e in constants.degree_entries(q)}
        second = {(e.source, e.target): e for e in constants.degree_entries(q + 1)}
        for source in strata[q]:
            for target in strata[q + 2]:
                form = [[0] * n for _ in range(n)]
                for middle in strata[q + 1]:
                    a, b = first.get((source, middle)), second.get((middle, target))
                    if a is None or b is None:
                        continue
                    for i in b.separating:
                        for j in a.separating:
                            form[i][j] += a.multiplicity * b.multiplicity
                if any(form[i][j] + form[j][i] != 0 for i in range(n) for j in range(n)):
                    defects.append((q, source, target))
    return defects


def chamber_label(chamber: Chamber, names: Optional[Mapping[SignVector, str]] = None) -> str:
    if names and chamber.sign_vector in names:
        return names[chamber.sign_vector]
    return format_signs(chamber.sign_vector)
