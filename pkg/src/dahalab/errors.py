"""Exception taxonomy shared by every dahalab module.

Math failures (a relation not holding on some input) are *data* and live in
reports; exceptions are reserved for contract violations: bad indices, wrong
signatures, impossible requests.
"""


class DahaLabError(Exception):
    """Base class so callers can catch everything from this package at once."""


class DivisionByZero(DahaLabError, ZeroDivisionError):
    """Scalar division by the zero rational function."""


class UndefinedOrder(DahaLabError):
    """t-adic order requested for the zero scalar (order would be +infinity)."""


class PoleAtPoint(DahaLabError):
    """Evaluation point lies on the vanishing locus of a denominator."""


class IndexOutOfRank(DahaLabError, IndexError):
    """Variable or generator index exceeds the rank it must respect."""


class SignatureViolation(DahaLabError):
    """Operation defined only on the plus (polynomial) part received Laurent input."""


class NegativeExponentAtZero(DahaLabError):
    """Setting x_k = 0 in a term carrying x_k to a negative power."""


class NonGenericEigenspace(DahaLabError):
    """Joint eigenspace is not one-dimensional; signals a convention bug."""


class RankDecrease(DahaLabError):
    """Embedding asked to shrink the rank; embeddings only grow it."""


class RankTooSmall(DahaLabError):
    """Truncation rank is below the element's own rank."""


class WindowTooSmall(DahaLabError):
    """Limit verification needs at least three sample points."""


class EmptyRankForDminus(DahaLabError):
    """The lowering arrow needs at least one y-variable to pair against."""


class NodeMismatch(DahaLabError):
    """Arrow applied at a node other than the element's rank."""


class RankViolation(DahaLabError):
    """Parsed expression uses a variable beyond the declared rank."""


class UnknownSymbol(DahaLabError):
    """Expression or operator word names something the grammar does not know."""


class ExprSyntaxError(DahaLabError):
    """Malformed expression text; carries the byte offset of the first bad token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class InexactDivision(DahaLabError):
    """Divided difference left a remainder — an implementation bug, never data."""
