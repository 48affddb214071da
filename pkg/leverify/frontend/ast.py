"""Lite-Eiffel abstract syntax.

Nodes compare structurally: source spans and the annotations filled in by the
type checker are excluded from equality, so a parsed program equals the parse
of its pretty-printed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

INTEGER = "INTEGER"
BOOLEAN = "BOOLEAN"
STRING = "STRING"
NONE = "NONE"
PRIMITIVES = frozenset({INTEGER, BOOLEAN})
BUILTIN_TYPES = frozenset({INTEGER, BOOLEAN, STRING})


@dataclass(frozen=True, slots=True)
class Span:
    line: int
    column: int
    file: str = ""

    def __str__(self) -> str:
        prefix = f"{self.file}:" if self.file else ""
        return f"{prefix}{self.line}:{self.column}"


def _span() -> Span | None:
    return field(default=None, compare=False, repr=False)


def _note() -> object:
    return field(default=None, compare=False, repr=False)


# Expressions


@dataclass(slots=True)
class IntLit:
    value: int
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class BoolLit:
    value: bool
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class VoidLit:
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class CurrentRef:
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class ResultRef:
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class ExcVRef:
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class Access:
    """Name, attribute read or function call: ``[target.]name [(args)]``.

    The type checker fills ``kind`` with one of ``local``, ``formal``,
    ``attribute`` or ``call`` and ``owner`` with the declaring class of an
    attribute or routine. ``static_class`` is the static class of the target.
    """

    target: Expr | None
    name: str
    args: tuple[Expr, ...] | None = None
    span: Span | None = _span()
    ty: str | None = _note()
    kind: str | None = _note()
    owner: str | None = _note()
    static_class: str | None = _note()


@dataclass(slots=True)
class Old:
    operand: Expr
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class Unary:
    op: str
    operand: Expr
    span: Span | None = _span()
    ty: str | None = _note()


@dataclass(slots=True)
class Binary:
    op: str
    left: Expr
    right: Expr
    span: Span | None = _span()
    ty: str | None = _note()


Expr = Union[IntLit, BoolLit, VoidLit, CurrentRef, ResultRef, ExcVRef, Access, Old, Unary, Binary]


@dataclass(slots=True)
class Clause:
    expr: Expr
    tag: str | None = None
    span: Span | None = _span()


# Statements


@dataclass(slots=True)
class Assign:
    """``target := value``; target is a local, an attribute of Current or ``Result``."""

    target: str
    value: Expr
    span: Span | None = _span()
    target_kind: str | None = _note()
    owner: str | None = _note()


@dataclass(slots=True)
class RetryAssign:
    value: Expr
    span: Span | None = _span()


@dataclass(slots=True)
class Create:
    target: str
    class_name: str | None
    routine: str | None = None
    args: tuple[Expr, ...] = ()
    span: Span | None = _span()
    target_kind: str | None = _note()
    owner: str | None = _note()
    routine_owner: str | None = _note()


@dataclass(slots=True)
class CallStmt:
    call: Access
    span: Span | None = _span()


@dataclass(slots=True)
class If:
    branches: list[tuple[Expr, list[Stmt]]]
    orelse: list[Stmt] = field(default_factory=list)
    span: Span | None = _span()


@dataclass(slots=True)
class Loop:
    init: list[Stmt]
    invariant: list[Clause]
    until: Expr
    body: list[Stmt]
    span: Span | None = _span()


@dataclass(slots=True)
class Check:
    clauses: list[Clause]
    span: Span | None = _span()


@dataclass(slots=True)
class Raise:
    span: Span | None = _span()


Stmt = Union[Assign, RetryAssign, Create, CallStmt, If, Loop, Check, Raise]


# Declarations


@dataclass(slots=True)
class Decl:
    name: str
    type_name: str
    span: Span | None = _span()


@dataclass(slots=True)
class RoutineContract:
    require: list[Clause] = field(default_factory=list)
    require_else: list[Clause] = field(default_factory=list)
    ensure: list[Clause] = field(default_factory=list)
    ensure_then: list[Clause] = field(default_factory=list)
    rescue_invariant: list[Clause] = field(default_factory=list)


@dataclass(slots=True)
class RoutineDecl:
    name: str
    formals: list[Decl] = field(default_factory=list)
    result_type: str | None = None
    locals: list[Decl] = field(default_factory=list)
    body: list[Stmt] | None = None
    rescue: list[Stmt] | None = None
    contract: RoutineContract = field(default_factory=RoutineContract)
    pure: bool = False
    modify: list[str] | None = None
    span: Span | None = _span()

    @property
    def deferred(self) -> bool:
        return self.body is None


@dataclass(slots=True)
class ClassDecl:
    name: str
    deferred: bool = False
    parent: str | None = None
    redefines: list[str] = field(default_factory=list)
    creators: list[str] = field(default_factory=list)
    attributes: list[Decl] = field(default_factory=list)
    routines: list[RoutineDecl] = field(default_factory=list)
    invariant: list[Clause] = field(default_factory=list)
    span: Span | None = _span()

    def routine(self, name: str) -> RoutineDecl | None:
        for routine in self.routines:
            if routine.name == name:
                return routine
        return None

    def attribute(self, name: str) -> Decl | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass(slots=True)
class SourceProgram:
    classes: list[ClassDecl]
    root: tuple[str, str] | None = field(default=None, compare=False)

    def find_class(self, name: str) -> ClassDecl | None:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None


def walk_expr(expr: Expr):
    """Yield ``expr`` and every sub-expression, pre-order."""
    yield expr
    if isinstance(expr, Access):
        if expr.target is not None:
            yield from walk_expr(expr.target)
        for arg in expr.args or ():
            yield from walk_expr(arg)
    elif isinstance(expr, (Old, Unary)):
        yield from walk_expr(expr.operand)
    elif isinstance(expr, Binary):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)


def walk_stmts(stmts: list[Stmt]):
    """Yield every statement in ``stmts``, nested ones included."""
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, If):
            for _, body in stmt.branches:
                yield from walk_stmts(body)
            yield from walk_stmts(stmt.orelse)
        elif isinstance(stmt, Loop):
            yield from walk_stmts(stmt.init)
            yield from walk_stmts(stmt.body)


def stmt_exprs(stmt: Stmt) -> list[Expr]:
    """Expressions directly owned by ``stmt`` (not those of nested statements)."""
    if isinstance(stmt, (Assign, RetryAssign)):
        return [stmt.value]
    if isinstance(stmt, Create):
        return list(stmt.args)
    if isinstance(stmt, CallStmt):
        return [stmt.call]
    if isinstance(stmt, If):
        return [cond for cond, _ in stmt.branches]
    if isinstance(stmt, Loop):
        return [clause.expr for clause in stmt.invariant] + [stmt.until]
    if isinstance(stmt, Check):
        return [clause.expr for clause in stmt.clauses]
    return []
