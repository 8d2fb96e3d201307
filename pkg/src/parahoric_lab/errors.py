"""Exception hierarchy.

Every error carries a machine-readable ``code`` and an ``exit_code`` used by
the command line front end: schema problems exit with 2, mathematical domain
violations with 3 and numerical failures with 4.
"""

from __future__ import annotations

from typing import Any


class ParahoricError(Exception):
    exit_code = 1

    def __init__(self, message: str = "", **context: Any):
        super().__init__(message)
        self.context = context

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


class SchemaError(ParahoricError, ValueError):
    exit_code = 2


class SuiteUnknown(SchemaError):
    pass


class DomainError(ParahoricError, ValueError):
    exit_code = 3


class SizeMismatch(DomainError):
    pass


class NotInvertibleInLoopGroup(DomainError):
    pass


class TruncationTooShallow(DomainError):
    """A coefficient beyond the known truncation order was required."""


class TracelessViolation(DomainError):
    pass


class DeterminantViolation(DomainError):
    pass


class FactorizationObstructed(DomainError):
    pass


class ResidueNotSplit(DomainError):
    """The characteristic polynomial has no full splitting over Q(i).

    ``context["factor"]`` holds the coefficients (constant term first) of the
    part that did not split.
    """


class NotNilpotent(DomainError):
    pass


class NotSemisimple(DomainError):
    pass


class DoesNotCommute(DomainError):
    pass


class NonIntegralGrading(DomainError):
    pass


class NonSquareScalar(DomainError):
    pass


class LeviViolation(DomainError):
    pass


class IncompatibleParabolic(DomainError):
    pass


class InconsistentDegrees(DomainError):
    pass


class Inconclusive(DomainError):
    pass


class NumericError(ParahoricError, ArithmeticError):
    exit_code = 4


class StepUnderflow(NumericError):
    pass


class EvaluationOutsideTruncation(NumericError):
    pass
