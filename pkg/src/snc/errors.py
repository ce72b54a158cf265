"""Exception hierarchy.

Every error raised on purpose by this package derives from :class:`SNCError`.
The CLI maps :class:`CapabilityError` subclasses to exit code 2 and everything
else to exit code 1.
"""

from __future__ import annotations


class SNCError(Exception):
    """Base class for all package errors."""


class CapabilityError(SNCError):
    """The request is well formed but beyond what the field or network allows."""


# finite-field linear algebra
class ZeroInverse(SNCError, ZeroDivisionError):
    pass


class NotInSpan(SNCError):
    pass


class NonUnique(SNCError):
    pass


class Singular(SNCError):
    pass


class UnionCoversSpace(SNCError):
    pass


class DimensionMismatch(SNCError, ValueError):
    pass


# networks and codes
class ValidationError(SNCError, ValueError):
    pass


class EmptySet(SNCError, ValueError):
    pass


class ShapeMismatch(SNCError, ValueError):
    def __init__(self, node: str | None, reason: str):
        self.node = node
        where = f"node {node!r}: " if node is not None else ""
        super().__init__(f"{where}{reason}")


class ConstructionFailed(SNCError):
    pass


class NotIndependent(SNCError):
    pass


class InvalidChoice(SNCError, ValueError):
    """A pinned reduction choice lies outside its legal set."""


class SecurityLevelTooHigh(CapabilityError):
    pass


class DimensionTooLarge(CapabilityError):
    pass


class FieldTooSmall(CapabilityError):
    pass


class RateExhausted(CapabilityError):
    pass


class BudgetExceeded(CapabilityError):
    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"{required} evaluations required, budget is {budget}")


class ParseError(SNCError):
    def __init__(self, line: int, reason: str, path: str | None = None):
        self.line = line
        self.reason = reason
        prefix = f"{path}:" if path else "line "
        super().__init__(f"{prefix}{line}: {reason}")
