"""Shared state and naming for the Lite-Eiffel to IVL translation."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.ast import BOOLEAN, INTEGER, RoutineDecl
from ..frontend.typecheck import TypedProgram
from ..ivl import ast as ivl

DYNAMIC = "dynamic"
STATIC_ONLY = "static_only"
MODES = (DYNAMIC, STATIC_ONLY)
CURRENT_RECEIVER = "Current"


def sort_of(type_name: str | None) -> str:
    if type_name == INTEGER:
        return ivl.INT
    if type_name == BOOLEAN:
        return ivl.BOOL
    return ivl.REF


_TO_VALUE = {sort: into for sort, into, _ in ivl.VALUE_INJECTIONS}
_FROM_VALUE = {sort: out for sort, _, out in ivl.VALUE_INJECTIONS}


def box(expr: ivl.Expr, sort: str) -> ivl.Expr:
    return ivl.FunApp(_TO_VALUE[sort], (expr,))


def unbox(expr: ivl.Expr, sort: str) -> ivl.Expr:
    return ivl.FunApp(_FROM_VALUE[sort], (expr,))


def default_value(sort: str) -> ivl.Expr:
    if sort == ivl.INT:
        return ivl.IntLit(0)
    if sort == ivl.BOOL:
        return ivl.FALSE
    return ivl.Var(ivl.VOID)


def allocated(heap: ivl.Expr, obj: ivl.Expr) -> ivl.Expr:
    return unbox(ivl.select(heap, obj, ivl.ALLOCATED), ivl.BOOL)


def proc_name(owner: str, routine: str) -> str:
    return f"{owner}.{routine}"


def post_name(owner: str, routine: str) -> str:
    return f"post.{owner}.{routine}"


def pre_name(owner: str, routine: str) -> str:
    return f"pre.{owner}.{routine}"


def fun_name(owner: str, routine: str) -> str:
    return f"fun.{owner}.{routine}"


def field_name(owner: str, attribute: str) -> str:
    return f"{owner}.{attribute}"


@dataclass(frozen=True)
class FrameSpec:
    """Locations a routine may modify: (receiver, Field constant) pairs.

    Receivers are ``Current`` or formal argument names of the routine version
    this frame was computed for.
    """

    mod_set: frozenset[tuple[str, str]] = frozenset()
    inferred: bool = True

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.mod_set)


@dataclass
class ExprEnv:
    """How source names map to IVL expressions in one translation context."""

    current: ivl.Expr = field(default_factory=lambda: ivl.Var(ivl.CURRENT))
    names: dict[str, ivl.Expr] = field(default_factory=dict)
    result: ivl.Expr | None = None
    excv: ivl.Expr = field(default_factory=lambda: ivl.Var(ivl.EXCV_VAR))
    heap: ivl.Expr = field(default_factory=lambda: ivl.Var(ivl.HEAP_VAR))


@dataclass
class TranslationContext:
    typed: TypedProgram
    mode: str = DYNAMIC
    pure: frozenset[tuple[str, str]] = frozenset()
    frames: dict[tuple[str, str], FrameSpec] = field(default_factory=dict)
    _temps: int = 0

    @property
    def dynamic(self) -> bool:
        return self.mode == DYNAMIC

    def is_pure(self, owner: str, routine: str) -> bool:
        return (owner, routine) in self.pure

    def has_function(self, owner: str, routine: RoutineDecl) -> bool:
        return routine.result_type is not None and self.is_pure(owner, routine.name)

    def field_for(self, cls: str, attribute: str) -> tuple[str, str]:
        """Field constant and sort of ``attribute`` as seen from class ``cls``."""
        found = self.typed.lookup_attribute(cls, attribute)
        if found is None:
            raise KeyError(f"{cls}.{attribute}")
        decl, owner = found
        return field_name(owner, attribute), sort_of(decl.type_name)

    def fresh_temp(self) -> str:
        name = f"$new{self._temps}"
        self._temps += 1
        return name

    def reset_temps(self) -> None:
        self._temps = 0


def formal_params(routine: RoutineDecl) -> list[tuple[str, str]]:
    return [(decl.name, sort_of(decl.type_name)) for decl in routine.formals]


def fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name = "$" + name
    return name
