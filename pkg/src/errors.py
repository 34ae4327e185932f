"""Exceptions raised by the arrangement pipeline."""


class ArrangementError(Exception):
    """Base class for every failure the command line reports with its own exit code."""
    exit_code = 2


class ParseError(ArrangementError):
    """Malformed arrangement text; carries the 1-based line and column."""
    exit_code = 3

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimensionMismatch(ArrangementError):
    """A vector does not have the length the ambient dimension requires."""
    exit_code = 4


class InvalidArrangement(ArrangementError):
    """Zero normal vector, duplicated hyperplane, or an empty arrangement."""
    exit_code = 15


class NonEssential(ArrangementError):
    """No flat of rank equal to the ambient dimension."""
    exit_code = 5


class NotGeneric(ArrangementError):
    """The flag is not transversal to the intersection poset."""
    exit_code = 6


class StratumMismatch(ArrangementError):
    """A flag stratum does not have the size of the matching Betti number."""
    exit_code = 7


class FlagSearchExhausted(ArrangementError):
    """No generic flag was found within the configured number of attempts."""
    exit_code = 8


class Dependent(ArrangementError):
    """The hyperplanes of an index tuple are linearly dependent in the section."""
    exit_code = 9


class DegreeMismatch(ArrangementError):
    """A cohomology element was combined with one of another degree."""
    exit_code = 10


class Unsolvable(ArrangementError):
    """The chamber-basis system has no solution (inconsistent stratification)."""
    exit_code = 11


class FactorizationFailure(ArrangementError):
    """A structure constant is not an integer multiple of its separating form."""
    exit_code = 12


class NotAComplex(ArrangementError):
    """Consecutive differentials do not compose to zero within tolerance."""
    exit_code = 13


class WeightError(ArrangementError):
    """Weight vector of the wrong length, or not rational where exactness is needed."""
    exit_code = 14
