"""Error types shared by every verifier stage."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .frontend.ast import Span


class VerifierError(RuntimeError):
    def __init__(
        self,
        message: str,
        *,
        code: str = "VERIFY_ERROR",
        hint: str | None = None,
        span: Span | None = None,
    ) -> None:
        super().__init__(message)
        self.code = code
        self.hint = hint or ""
        self.span = span

    def location(self) -> str:
        if self.span is None:
            return ""
        return str(self.span)


class ParseError(VerifierError):
    def __init__(self, message: str, *, span: Span | None = None, expected: frozenset[str] = frozenset()) -> None:
        super().__init__(
            message,
            code="PARSE_ERROR",
            hint="Check the Lite-Eiffel syntax near the reported position.",
            span=span,
        )
        self.expected = expected

    @property
    def line(self) -> int:
        return self.span.line if self.span else 0

    @property
    def column(self) -> int:
        return self.span.column if self.span else 0


class TypeCheckError(VerifierError):
    """A single type-checking diagnostic."""

    def __init__(self, message: str, *, span: Span | None = None) -> None:
        super().__init__(message, code="TYPE_ERROR", hint="Fix the declaration or expression types.", span=span)


class TypeCheckFailed(VerifierError):
    def __init__(self, errors: list[TypeCheckError]) -> None:
        first = errors[0] if errors else None
        summary = f"{len(errors)} type error(s)"
        if first is not None:
            summary += f"; first: {first}"
        super().__init__(
            summary,
            code="TYPE_ERROR",
            hint="Fix the declaration or expression types.",
            span=first.span if first else None,
        )
        self.errors = errors


class WellFormednessError(VerifierError):
    def __init__(self, message: str, *, node: str = "") -> None:
        super().__init__(message, code="IVL_ERROR", hint="Translator produced malformed IVL; report a bug.")
        self.node = node


class MissingRescueInvariant(VerifierError):
    def __init__(self, routine: str, *, span: Span | None = None) -> None:
        super().__init__(
            f"routine {routine} has a rescue clause but no rescue invariant",
            code="RESCUE_INVARIANT",
            hint="Add a 'rescue invariant' clause describing the state after each body attempt.",
            span=span,
        )
        self.routine = routine


class FrameReceiverUnsupported(VerifierError):
    def __init__(self, routine: str, receiver: str, *, span: Span | None = None) -> None:
        super().__init__(
            f"cannot infer frame of {routine}: postcondition mentions an attribute of {receiver}",
            code="FRAME_ERROR",
            hint="Give the original declaration a 'modify' clause listing attr or formal.attr entries.",
            span=span,
        )
        self.routine = routine
        self.receiver = receiver


class FrameWidened(VerifierError):
    def __init__(self, routine: str, entry: str, original_owner: str, *, span: Span | None = None) -> None:
        super().__init__(
            f"modify clause of {routine} lists {entry}, outside the frame of {original_owner}'s declaration",
            code="FRAME_ERROR",
            hint=f"A redefinition may only add attributes declared below {original_owner}.",
            span=span,
        )
        self.routine = routine
        self.entry = entry


class PurityError(VerifierError):
    def __init__(self, routine: str, offending: str, *, span: Span | None = None) -> None:
        super().__init__(
            f"routine {routine} must be pure but {offending}",
            code="PURITY_ERROR",
            hint="Routines used in contracts or expressions may not modify the heap.",
            span=span,
        )
        self.routine = routine
        self.offending = offending


class PurityFailed(VerifierError):
    def __init__(self, errors: list[PurityError]) -> None:
        first = errors[0] if errors else None
        summary = f"{len(errors)} purity error(s)"
        if first is not None:
            summary += f"; first: {first}"
        super().__init__(
            summary,
            code="PURITY_ERROR",
            hint="Routines used in contracts or expressions may not modify the heap.",
            span=first.span if first else None,
        )
        self.errors = errors


class SolverUnavailable(VerifierError):
    def __init__(self, message: str) -> None:
        super().__init__(
            message,
            code="SOLVER_UNAVAILABLE",
            hint="Install z3-solver or point --solver / LEVERIFY_SOLVER at an SMT-LIB2 solver.",
        )


class SolverProtocolError(VerifierError):
    def __init__(self, message: str) -> None:
        super().__init__(
            message,
            code="SOLVER_PROTOCOL",
            hint="The solver must print sat, unsat or unknown for each script.",
        )
