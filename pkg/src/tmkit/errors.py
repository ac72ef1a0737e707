"""Exception types raised by the toolkit.

Every error carries a stable machine-readable ``code`` so callers (and the
CLI) can dispatch without string-matching messages.
"""

from __future__ import annotations

from typing import Any


class TmError(Exception):
    """Base class for all toolkit errors."""

    code = "ERROR"

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class ParseError(TmError):
    """Lexical or syntax error in DSL text. Carries the offending span."""

    code = "PARSE"

    def __init__(self, message: str, span: Any = None, expected: tuple[str, ...] = ()) -> None:
        super().__init__(message, span=span, expected=expected)
        self.span = span
        self.expected = expected

    def __str__(self) -> str:
        loc = f" at {self.span}" if self.span is not None else ""
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.code}{loc}: {self.message}{hint}"


class DuplicateIdError(TmError):
    """Two declarations claim the same identifier. Carries both spans."""

    code = "DUPID"

    def __init__(self, message: str, first_span: Any = None, second_span: Any = None) -> None:
        super().__init__(message, first_span=first_span, second_span=second_span)
        self.first_span = first_span
        self.second_span = second_span


class DanglingReferenceError(TmError):
    code = "DANGLING"


class UndefinedReferenceError(TmError):
    """A name does not resolve to any declared element."""

    code = "UNDEF"

    def __init__(self, message: str, span: Any = None) -> None:
        super().__init__(message, span=span)
        self.span = span


class DisconnectedRegionError(TmError):
    """Region resolves to a subgraph that is not weakly connected."""

    code = "REGION_DISCONNECTED"

    def __init__(self, message: str, components: tuple[tuple[str, ...], ...] = (), span: Any = None) -> None:
        super().__init__(message, components=components, span=span)
        self.components = components
        self.span = span


class UnboundedLoopError(TmError):
    code = "UNBOUNDED_LOOP"


class InvalidInputError(TmError):
    """An operation's precondition failed; carries the offending report."""

    code = "INVALID_INPUT"

    def __init__(self, message: str, report: Any = None) -> None:
        super().__init__(message, report=report)
        self.report = report


class TooLargeError(TmError):
    code = "TOO_LARGE"


class StepBudgetError(TmError):
    """Simulation exhausted maxSteps. The partial trace is attached."""

    code = "BUDGET"

    def __init__(self, message: str, trace: Any = None) -> None:
        super().__init__(message, trace=trace)
        self.trace = trace


class SchemaVersionError(TmError):
    code = "VERSION"


class SchemaError(TmError):
    """Structural violation in a JSON document. Carries a JSON pointer."""

    code = "SCHEMA"

    def __init__(self, message: str, pointer: str = "") -> None:
        super().__init__(message, pointer=pointer)
        self.pointer = pointer

    def __str__(self) -> str:
        where = f" at {self.pointer}" if self.pointer else ""
        return f"{self.code}{where}: {self.message}"


class MultipleInitialError(TmError):
    code = "MULTI_INITIAL"


class UnsupportedNodeError(TmError):
    code = "UNSUPPORTED"
