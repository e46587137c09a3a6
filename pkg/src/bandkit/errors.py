"""Exception types raised across bandkit.

Every error renders as ``Name(arg, ...)`` so that CLI messages and test
assertions can match on a stable string.
"""


class BandError(ValueError):
    """Base class for all domain errors."""

    def __init__(self, *args):
        super().__init__(*args)
        self.args = args

    def __str__(self):
        return "%s(%s)" % (type(self).__name__, ", ".join(map(str, self.args)))


# band-core
class NotIdempotent(BandError):
    pass


class NotAssociative(BandError):
    pass


class IndexOutOfRange(BandError):
    pass


# green-order
class ClassNotBelow(BandError):
    pass


# structure-decomp
class NotNormal(BandError):
    pass


class NotRegular(BandError):
    pass


class NotSemilattice(BandError):
    pass


class NotComparable(BandError):
    pass


# constructors
class ZeroDimension(BandError):
    pass


class NotMeetClosed(BandError):
    pass


class TransitivityViolation(BandError):
    pass


class NotMorphism(BandError):
    pass


class TargetsDiffer(BandError):
    pass


class MultiplicityExceeded(BandError):
    pass


class NotTree(BandError):
    pass


# homogeneity
class InvalidPartial(BandError):
    pass


# fraisse
class InvalidProblem(BandError):
    pass


class ClassViolation(BandError):
    pass


class BudgetExhausted(BandError):
    pass


# catalog
class OrderTooLarge(BandError):
    pass


class FormatVersionMismatch(BandError):
    pass


class CorruptEntry(BandError):
    pass


class ParseError(BandError):
    """Malformed band document; args are (message, line, column)."""
