"""
Domain errors - one class per failure mode the services can report.

Every error carries a human readable message plus an optional ``detail``
mapping that ends up in the structured JSON error document printed by the
command-line front end. ``exit_code`` is the process exit status the CLI
uses for that family of failures.
"""
from __future__ import annotations

from typing import Any, Dict, Optional, Sequence

__all__ = [
    "QuadricError",
    "FieldMismatch",
    "DivisionByZero",
    "DegreeError",
    "DegenerateInput",
    "NotSmooth",
    "DegenerateRange",
    "NoTorsionSection",
    "RangeError",
    "Reducible",
    "InvalidPrime",
    "ParseError",
    "NotBihomogeneous",
    "UsageError",
    "InternalConsistencyError",
]


class QuadricError(Exception):
    """Base class for every error raised by the library."""
    exit_code = 1

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = dict(detail or {})

    def to_dict(self) -> Dict[str, Any]:
        return {"type": type(self).__name__, "message": self.message, "detail": self.detail}


class FieldMismatch(QuadricError):
    """Operands live in different fields, or a root of unity is missing."""


class DivisionByZero(QuadricError):
    pass


class DegreeError(QuadricError):
    """A bidegree or cohomology range precondition failed."""


class DegenerateInput(QuadricError):
    pass


class NotSmooth(QuadricError):
    exit_code = 3


class DegenerateRange(QuadricError):
    pass


class NoTorsionSection(QuadricError):
    pass


class RangeError(QuadricError):
    pass


class Reducible(QuadricError):
    pass


class InvalidPrime(QuadricError):
    pass


class ParseError(QuadricError):
    exit_code = 2

    def __init__(self, message: str, position: int = 0, detail: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, {"position": position, **(detail or {})})
        self.position = position


class NotBihomogeneous(QuadricError):
    exit_code = 2

    def __init__(self, message: str, monomials: Sequence[str]) -> None:
        super().__init__(message, {"monomials": list(monomials)})
        self.monomials = tuple(monomials)


class InternalConsistencyError(QuadricError):
    """A mathematically impossible outcome was observed; never swallowed."""
    exit_code = 4


class UsageError(QuadricError):
    """Bad command-line arguments."""
    exit_code = 2
