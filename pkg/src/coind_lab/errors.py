from __future__ import annotations

from typing import Any, Optional, Tuple


class CoindLabError(Exception):
    """Root of every error raised by coind_lab."""


class ValidationError(CoindLabError, ValueError):
    """An object failed its validator.

    ``kind`` names the violated axiom or law, ``witness`` holds the indices (or index
    sets) that replay the failure.
    """

    def __init__(self, message: str, kind: str = "invalid", witness: Tuple[Any, ...] = ()) -> None:
        super().__init__(message)
        self.kind = kind
        self.witness = tuple(witness)

    def as_record(self) -> dict:
        return {"error": type(self).__name__, "kind": self.kind, "witness": plain_value(self.witness), "message": str(self)}


class GroupValidationError(ValidationError):
    pass


class SubgroupError(ValidationError):
    pass


class HomomorphismError(ValidationError):
    pass


class FiltrationError(ValidationError):
    pass


class NotStronglyCentral(ValidationError):
    def __init__(self, message: str, i: int, j: int, witness: Tuple[int, int]) -> None:
        super().__init__(message, kind="strong_centrality", witness=witness)
        self.i = i
        self.j = j

    def as_record(self) -> dict:
        rec = super().as_record()
        rec.update({"i": self.i, "j": self.j})
        return rec


class ActionValidationError(ValidationError):
    pass


class ScfActionViolation(ValidationError):
    def __init__(self, message: str, kind: str, i: int, j: Optional[int], witness: Tuple[int, int]) -> None:
        super().__init__(message, kind=kind, witness=witness)
        self.i = i
        self.j = j

    def as_record(self) -> dict:
        rec = super().as_record()
        rec.update({"i": self.i, "j": self.j})
        return rec


class TopologyValidationError(ValidationError):
    pass


class TopGroupValidationError(ValidationError):
    def __init__(self, message: str, operation: str, point: Any, open_set: Tuple[int, ...]) -> None:
        super().__init__(message, kind=operation, witness=(point, open_set))
        self.operation = operation
        self.point = point
        self.open_set = open_set


class ContinuityError(ValidationError):
    pass


class BudgetExceeded(CoindLabError):
    """An enumeration would exceed the configured budget; nothing partial is returned."""

    def __init__(self, quantity: str, required: int, limit: int) -> None:
        super().__init__(f"Budget exceeded for {quantity}: need {required}, limit {limit}")
        self.quantity = quantity
        self.required = required
        self.limit = limit


class SpecFileError(CoindLabError):
    pass


class SpecParseError(SpecFileError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ResolutionError(SpecFileError):
    def __init__(self, reference: str, section: str, owner: str) -> None:
        super().__init__(f"{owner}: unresolved reference '{reference}' in section '{section}'")
        self.reference = reference
        self.section = section
        self.owner = owner


class SpecValidationError(SpecFileError):
    def __init__(self, name: str, cause: Exception) -> None:
        super().__init__(f"{name}: {cause}")
        self.name = name
        self.cause = cause


class InternalConsistencyError(CoindLabError, AssertionError):
    """A property that holds mathematically failed re-verification."""


def plain_value(value: Any) -> Any:
    # numpy values and nested tuples → JSON-friendly values
    if isinstance(value, dict):
        return {str(k): plain_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return value
