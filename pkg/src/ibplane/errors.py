"""
Exception hierarchy
===================

Every error raised deliberately by ibplane derives from ``IbplaneError`` so
callers (and the CLI) can separate domain failures from programming bugs.

    IbplaneError
    ├── InvalidInputError      bad shapes, non-normalised mass, out-of-range args
    │   └── ParseError         joint/encoder files that cannot be decoded
    ├── PreconditionError      e.g. a deterministic construct on a noisy joint
    ├── InvariantError         a computed quantity broke an information inequality
    └── ResourceLimitError     enumeration guards (partitions, simplex grids)
"""

from __future__ import annotations

from pathlib import Path


class IbplaneError(Exception):
    """Base class for all ibplane errors."""


class InvalidInputError(IbplaneError, ValueError):
    """Input violates a documented domain constraint."""


class ParseError(InvalidInputError):
    """A distribution file could not be parsed.

    Attributes:
        path: File being parsed (None for in-memory payloads)
        row: 1-based row of the offending cell, if known
        column: 1-based column of the offending cell, if known
    """

    def __init__(
        self,
        reason: str,
        path: Path | str | None = None,
        row: int | None = None,
        column: int | None = None,
    ) -> None:
        self.reason = reason
        self.path = str(path) if path is not None else None
        self.row = row
        self.column = column
        where = []
        if self.path:
            where.append(self.path)
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{reason}")


class PreconditionError(IbplaneError):
    """An operation's precondition does not hold for otherwise valid input.

    Attributes:
        row: Index of the offending x outcome, when one can be named
    """

    def __init__(self, message: str, row: int | None = None) -> None:
        self.row = row
        if row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)


class ResourceLimitError(IbplaneError):
    """A desk-scale enumeration guard was exceeded.

    Attributes:
        what: Name of the guarded quantity
        requested: Requested size
        limit: Configured maximum
    """

    def __init__(self, what: str, requested: int, limit: int) -> None:
        self.what = what
        self.requested = requested
        self.limit = limit
        super().__init__(f"{what} = {requested} exceeds the guard of {limit}")


class InvariantError(IbplaneError):
    """A computed plane point broke an information inequality beyond rounding.

    Attributes:
        quantity: What was measured, e.g. ``"I(Y;T)"``
        value: Measured value
        cap: The value it may not exceed
    """

    def __init__(self, quantity: str, value: float, cap: float, where: str = "") -> None:
        self.quantity = quantity
        self.value = value
        self.cap = cap
        suffix = f" {where}" if where else ""
        super().__init__(f"{quantity} = {value:.12g} exceeds {cap:.12g}{suffix}")
