"""Exception hierarchy shared by every compiler stage."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)`` plus 1-based line/col of start."""

    start: int
    end: int
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class QMLError(Exception):
    """A user-facing error (bad source, ill-typed program, ...)."""

    kind = "error"

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def diagnostic(self, filename: str = "<input>") -> str:
        if self.span is None:
            return f"{filename}: error: {self.message}"
        return f"{filename}:{self.span.line}:{self.span.col}: error: {self.message}"


class LexError(QMLError):
    def __init__(self, position: int, char: str, span: Span):
        super().__init__(f"unexpected character {char!r}", span)
        self.position = position
        self.char = char


class ParseError(QMLError):
    def __init__(self, message: str, span: Span, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message}; expected one of {', '.join(sorted(expected))}"
        super().__init__(message, span)
        self.expected = expected


class TypeCheckError(QMLError):
    pass


class UnusedVariable(TypeCheckError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"variable {name!r} is never used (weakening must be explicit: ^[{name}])", span)
        self.name = name


class UnknownVariable(TypeCheckError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"unknown variable {name!r}", span)
        self.name = name


class UnknownFunction(TypeCheckError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"unknown function {name!r} (only earlier definitions may be called)", span)
        self.name = name


class TypeMismatch(TypeCheckError):
    pass


class BranchTypeMismatch(TypeCheckError):
    pass


class ArityMismatch(TypeCheckError):
    pass


class DuplicateName(TypeCheckError):
    pass


class OrthogonalityFailure(TypeCheckError):
    def __init__(self, left, right, span: Span | None = None):
        from .terms import render_term

        super().__init__(
            f"cannot derive orthogonality of {render_term(left)} and {render_term(right)}", span
        )
        self.left = left
        self.right = right


class NonStrictUnderIfq(TypeCheckError):
    pass


class ZeroAmplitude(TypeCheckError):
    pass


class NestedSup(TypeCheckError):
    pass


class CompileError(QMLError):
    pass


class SizeMismatch(QMLError):
    pass


class CapExceeded(QMLError):
    pass


class InternalError(Exception):
    """A broken compiler invariant; never caused by user input."""
