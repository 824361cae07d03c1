# src/core/errors.py
from typing import Iterable, Optional


class IntersectionError(Exception):
    """Base class for every domain error raised by the calculator."""


# graded ring

class RingSpecError(IntersectionError):
    """A ring presentation is malformed."""


class NonTerminatingRule(RingSpecError):
    pass


class DuplicateGenerator(RingSpecError):
    pass


class InhomogeneousRule(RingSpecError):
    pass


class RingMismatch(IntersectionError):
    pass


class NotAUnit(IntersectionError):
    pass


class UnknownTopMonomial(IntersectionError):
    pass


class PartsMismatch(IntersectionError):
    pass


# bundles, strata, counts

class InvalidBundle(IntersectionError):
    pass


class RankCodimMismatch(IntersectionError):
    pass


class DimensionMismatch(IntersectionError):
    pass


class DegreeMismatch(IntersectionError):
    pass


class Unsupported(IntersectionError):
    pass


class NonIntegerResult(IntersectionError):
    pass


class MethodsDisagree(IntersectionError):
    """Direct and residual evaluation of the same count gave different totals."""


class ConfigurationError(IntersectionError):
    """A structured configuration document could not be turned into objects."""


class SymmetryError(AssertionError):
    """A splitting-principle result was not symmetric in the Chern roots."""


# expression language

class ExpressionError(IntersectionError):
    pass


class ParseError(ExpressionError):
    def __init__(self, message: str, offset: int, expected: Optional[Iterable[str]] = None):
        self.offset = offset
        self.expected = frozenset(expected or ())
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnboundSymbol(ExpressionError):
    pass


class EvaluationTypeError(ExpressionError):
    pass
