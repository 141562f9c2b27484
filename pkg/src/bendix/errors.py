"""Exception types shared across the library, with stable codes for CLI output."""

from __future__ import annotations

from fractions import Fraction
from typing import Any


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return str(value)


class BendixError(ValueError):
    """Base class for diagnosable failures.

    Carries a machine-readable ``code`` plus free-form context so the CLI can
    emit a structured error object on stderr.
    """

    code = "error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "context": {k: _plain(v) for k, v in sorted(self.context.items())},
        }


class SchemaError(BendixError):
    code = "schema"


class UnknownEdge(BendixError):
    code = "unknown-edge"


class GuardExceeded(BendixError):
    code = "guard-exceeded"


class PreconditionViolated(BendixError):
    code = "precondition"


class NotLopsided(BendixError):
    code = "not-lopsided"


class LaminarViolation(BendixError):
    code = "laminar-violation"


class NotFull(BendixError):
    code = "not-full"


class TOutOfImage(BendixError):
    code = "t-out-of-image"


class NotToric(BendixError):
    code = "not-toric"


class DimensionTooLarge(BendixError):
    code = "dimension-too-large"


class DimensionMismatch(BendixError):
    code = "dimension-mismatch"


class EquivalenceUndecided(BendixError):
    """Raised when only invariant screening is available and it cannot separate."""

    code = "equivalence-undecided"
