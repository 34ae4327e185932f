"""Exact rational linear algebra and strict-feasibility linear programming."""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = Tuple[Fraction, ...]
Rows = Sequence[Sequence[Fraction]]


class UnboundedError(Exception):
    """Raised when a linear program has no finite optimum."""
    pass


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, sympy Rationals and QQ elements to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    # sympy Rational / Integer
    if hasattr(value, 'p') and hasattr(value, 'q'):
        return Fraction(int(value.p), int(value.q))
    # QQ ground types (PythonMPQ, gmpy2.mpq)
    return Fraction(int(value.numerator), int(value.denominator))


def sign(value) -> int:
    """Return -1, 0 or +1."""
    return (value > 0) - (value < 0)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _domain_matrix(rows: Rows, ncols: int) -> DomainMatrix:
    entries = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row]
               for row in rows]
    return DomainMatrix(entries, (len(rows), ncols), QQ)


def rref(rows: Rows, ncols: int) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """
    Reduced row echelon form over the rationals.

    Args:
        rows: Matrix rows of exact rationals
        ncols: Number of columns (needed when there are no rows)

    Returns:
        (reduced rows, pivot column indices)
    """
    if not rows or ncols == 0:
        return [list(map(Fraction, row)) for row in rows], ()
    reduced, pivots = _domain_matrix(rows, ncols).rref()
    return ([[to_fraction(x) for x in row] for row in reduced.to_Matrix().tolist()],
            tuple(int(p) for p in pivots))


def rank(rows: Rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def determinant(rows: Rows) -> Fraction:
    """Determinant of a square matrix; the empty matrix has determinant 1."""
    if not rows:
        return Fraction(1)
    return to_fraction(_domain_matrix(rows, len(rows)).det())


def inverse(rows: Rows) -> Optional[List[List[Fraction]]]:
    """Inverse of a square matrix, or None when it is singular."""
    size = len(rows)
    augmented = [list(row) + [Fraction(int(i == j)) for j in range(size)]
                 for i, row in enumerate(rows)]
    reduced, pivots = rref(augmented, 2 * size)
    if pivots != tuple(range(size)):
        return None
    return [row[size:] for row in reduced]


def is_consistent(rows: Rows, rhs: Sequence[Fraction], ncols: int) -> bool:
    """True iff rows . x = rhs has a solution."""
    augmented = [list(row) + [Fraction(value)] for row, value in zip(rows, rhs)]
    return ncols not in rref(augmented, ncols + 1)[1]


class SimplexTableau:
    """
    Dense simplex tableau for  max c.y  subject to  A y <= b, y >= 0,  with b >= 0.

    The slack basis is feasible from the start, so no first phase is needed.
    Bland's rule is used for both the entering and the leaving variable, which
    rules out cycling on the degenerate programs the chamber tests produce.
    """

    def __init__(self, a: Rows, b: Sequence[Fraction], c: Sequence[Fraction]):
        m = len(a)
        self.num_vars = len(c)
        self.rows = [[Fraction(x) for x in a[i]]
                     + [Fraction(int(i == j)) for j in range(m)]
                     + [Fraction(b[i])] for i in range(m)]
        self.objective = [-Fraction(x) for x in c] + [Fraction(0)] * (m + 1)
        self.basis = [self.num_vars + i for i in range(m)]
        if any(row[-1] < 0 for row in self.rows):
            raise ValueError("SimplexTableau needs a non-negative right-hand side")

    def pivot(self, i: int, j: int) -> None:
        piv = self.rows[i][j]
        row = [x / piv for x in self.rows[i]]
        self.rows[i] = row
        for r, other in enumerate(self.rows):
            f = other[j]
            if r != i and f != 0:
                self.rows[r] = [x - f * y for x, y in zip(other, row)]
        f = self.objective[j]
        if f != 0:
            self.objective = [x - f * y for x, y in zip(self.objective, row)]
        self.basis[i] = j

    def maximize(self) -> Fraction:
        width = len(self.objective) - 1
        while True:
            entering = next((j for j in range(width) if self.objective[j] < 0), None)
            if entering is None:
                return self.objective[-1]
            candidates = [(row[-1] / row[entering], self.basis[i], i)
                          for i, row in enumerate(self.rows) if row[entering] > 0]
            if not candidates:
                raise UnboundedError(f"variable {entering} can grow without bound")
            _, _, leaving = min(candidates)
            self.pivot(leaving, entering)

    def solution(self) -> List[Fraction]:
        values = [Fraction(0)] * self.num_vars
        for i, var in enumerate(self.basis):
            if var < self.num_vars:
                values[var] = self.rows[i][-1]
        return values


def strict_point(normals: Rows, offsets: Sequence[Fraction], dimension: int) -> Optional[Vector]:
    """
    Find an exact rational x with  normals[i] . x + offsets[i] > 0  for all i.

    Solves  max t  subject to  normals[i] . x + offsets[i] >= t,  t <= 1,
    after shifting t by a constant so the origin is a feasible starting vertex.

    Args:
        normals: Constraint normal vectors, each of length `dimension`
        offsets: Constant terms
        dimension: Number of free coordinates

    Returns:
        A strictly feasible point, or None when the open region is empty
    """
    offsets = [Fraction(o) for o in offsets]
    if not normals:
        return (Fraction(0),) * dimension
    if dimension == 0:
        return () if all(o > 0 for o in offsets) else None

    shift = min(min(offsets), Fraction(0)) - 1
    a, b = [], []
    for normal, offset in zip(normals, offsets):
        # x = p - m with p, m >= 0; u = t - shift >= 0
        a.append([-x for x in normal] + [Fraction(x) for x in normal] + [Fraction(1)])
        b.append(offset - shift)
    a.append([Fraction(0)] * (2 * dimension) + [Fraction(1)])
    b.append(1 - shift)
    c = [Fraction(0)] * (2 * dimension) + [Fraction(1)]

    tableau = SimplexTableau(a, b, c)
    if tableau.maximize() + shift <= 0:
        return None
    y = tableau.solution()
    return tuple(y[i] - y[dimension + i] for i in range(dimension))


def only_trivial_solution(normals: Rows, dimension: int) -> bool:
    """
    True iff d = 0 is the only solution of  normals[i] . d >= 0  for all i.

    The normals must span the space; then any nonzero feasible d has some
    normals[i] . d > 0, which the program  max sum_i normals[i] . d  detects.
    """
    total = [sum((Fraction(n[k]) for n in normals), Fraction(0)) for k in range(dimension)]
    a, b = [], []
    for normal in normals:
        a.append([-Fraction(x) for x in normal] + [Fraction(x) for x in normal])
        b.append(Fraction(0))
    for normal in normals:
        a.append([Fraction(x) for x in normal] + [-Fraction(x) for x in normal])
        b.append(Fraction(1))
    c = total + [-x for x in total]
    return SimplexTableau(a, b, c).maximize() == 0
