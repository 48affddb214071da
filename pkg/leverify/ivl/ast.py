"""Boogie-subset intermediate verification language.

Expressions are immutable and hashable; statements and declarations are plain
dataclasses. The printer in ``leverify.ivl.printer`` renders a program as
Boogie text and ``leverify.vcgen`` consumes it directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from ..frontend.ast import Span

BOOL = "bool"
INT = "int"
REF = "ref"
FIELD = "Field"
TYPENAME = "TypeName"
VALUE = "Value"
HEAP = "HeapType"
SORTS = (BOOL, INT, REF, FIELD, TYPENAME, VALUE, HEAP)

HEAP_VAR = "Heap"
EXCV_VAR = "ExcV"
RETRY_VAR = "Retry"
CURRENT = "Current"
RESULT = "Result"
VOID = "Void"
ALLOCATED = "$allocated"
TYPE_FN = "$type"
HEAP_WF = "$HeapWf"
# (sort, into Value, out of Value)
VALUE_INJECTIONS = (
    (INT, "$int2val", "$val2int"),
    (BOOL, "$bool2val", "$val2bool"),
    (REF, "$ref2val", "$val2ref"),
)
NONE_TYPE = "NONE"

# obligation kinds
POSTCONDITION = "postcondition"
FRAME = "frame"
ASSERT = "assert"
LOOP_INV_ENTRY = "loop-invariant-entry"
LOOP_INV_INDUCTIVE = "loop-invariant-inductive"
CALLEE_PRE = "callee-precondition"
CLASS_INV_EXIT = "class-invariant-exit"
OBLIGATION_KINDS = (
    POSTCONDITION,
    FRAME,
    ASSERT,
    LOOP_INV_ENTRY,
    LOOP_INV_INDUCTIVE,
    CALLEE_PRE,
    CLASS_INV_EXIT,
)


# Expressions


@dataclass(frozen=True, slots=True)
class BoolLit:
    value: bool


@dataclass(frozen=True, slots=True)
class IntLit:
    value: int


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Old:
    operand: Expr


@dataclass(frozen=True, slots=True)
class FunApp:
    name: str
    args: tuple[Expr, ...] = ()


@dataclass(frozen=True, slots=True)
class MapSelect:
    """``heap[obj, field]``."""

    heap: Expr
    obj: Expr
    field: Expr


@dataclass(frozen=True, slots=True)
class MapStore:
    """``heap[obj, field := value]``."""

    heap: Expr
    obj: Expr
    field: Expr
    value: Expr


@dataclass(frozen=True, slots=True)
class UnOp:
    op: str  # "!" or "-"
    operand: Expr


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Quant:
    kind: str  # "forall" or "exists"
    bound: tuple[tuple[str, str], ...]
    body: Expr


Expr = Union[BoolLit, IntLit, Var, Old, FunApp, MapSelect, MapStore, UnOp, BinOp, Quant]

TRUE = BoolLit(True)
FALSE = BoolLit(False)
ARITH_OPS = frozenset({"+", "-", "*"})
ORDER_OPS = frozenset({"<", "<=", ">", ">="})
EQ_OPS = frozenset({"==", "!="})
LOGIC_OPS = frozenset({"&&", "||", "==>", "<==>"})


def not_(expr: Expr) -> Expr:
    if isinstance(expr, BoolLit):
        return BoolLit(not expr.value)
    if isinstance(expr, UnOp) and expr.op == "!":
        return expr.operand
    return UnOp("!", expr)


def and_(*exprs: Expr) -> Expr:
    parts = [e for e in exprs if e != TRUE]
    if FALSE in parts:
        return FALSE
    if not parts:
        return TRUE
    result = parts[0]
    for part in parts[1:]:
        result = BinOp("&&", result, part)
    return result


def or_(*exprs: Expr) -> Expr:
    parts = [e for e in exprs if e != FALSE]
    if TRUE in parts:
        return TRUE
    if not parts:
        return FALSE
    result = parts[0]
    for part in parts[1:]:
        result = BinOp("||", result, part)
    return result


def implies(antecedent: Expr, consequent: Expr) -> Expr:
    if antecedent == TRUE:
        return consequent
    if antecedent == FALSE or consequent == TRUE:
        return TRUE
    return BinOp("==>", antecedent, consequent)


def eq(left: Expr, right: Expr) -> Expr:
    return BinOp("==", left, right)


def subtype(left: Expr, right: Expr) -> Expr:
    return BinOp("<:", left, right)


def type_of(ref: Expr) -> Expr:
    return FunApp(TYPE_FN, (ref,))


def select(heap: Expr, obj: Expr, field_name: str) -> Expr:
    return MapSelect(heap, obj, Var(field_name))


def walk(expr: Expr):
    """Yield ``expr`` and its sub-expressions, pre-order."""
    yield expr
    if isinstance(expr, (Old, UnOp)):
        yield from walk(expr.operand)
    elif isinstance(expr, FunApp):
        for arg in expr.args:
            yield from walk(arg)
    elif isinstance(expr, MapSelect):
        yield from walk(expr.heap)
        yield from walk(expr.obj)
        yield from walk(expr.field)
    elif isinstance(expr, MapStore):
        yield from walk(expr.heap)
        yield from walk(expr.obj)
        yield from walk(expr.field)
        yield from walk(expr.value)
    elif isinstance(expr, BinOp):
        yield from walk(expr.left)
        yield from walk(expr.right)
    elif isinstance(expr, Quant):
        yield from walk(expr.body)


def substitute(expr: Expr, mapping: dict[str, Expr], *, old_heap: Expr | None = None) -> Expr:
    """Replace free variables by name.

    When ``old_heap`` is given, ``old(e)`` is eliminated by evaluating ``e``
    with ``Heap`` mapped to ``old_heap`` (and other names as in ``mapping``).
    """
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, (BoolLit, IntLit)):
        return expr
    if isinstance(expr, Old):
        if old_heap is None:
            return Old(substitute(expr.operand, mapping))
        inner = dict(mapping)
        inner[HEAP_VAR] = old_heap
        return substitute(expr.operand, inner)
    if isinstance(expr, UnOp):
        return UnOp(expr.op, substitute(expr.operand, mapping, old_heap=old_heap))
    if isinstance(expr, FunApp):
        return FunApp(expr.name, tuple(substitute(a, mapping, old_heap=old_heap) for a in expr.args))
    if isinstance(expr, MapSelect):
        return MapSelect(
            substitute(expr.heap, mapping, old_heap=old_heap),
            substitute(expr.obj, mapping, old_heap=old_heap),
            substitute(expr.field, mapping, old_heap=old_heap),
        )
    if isinstance(expr, MapStore):
        return MapStore(
            substitute(expr.heap, mapping, old_heap=old_heap),
            substitute(expr.obj, mapping, old_heap=old_heap),
            substitute(expr.field, mapping, old_heap=old_heap),
            substitute(expr.value, mapping, old_heap=old_heap),
        )
    if isinstance(expr, BinOp):
        return BinOp(
            expr.op,
            substitute(expr.left, mapping, old_heap=old_heap),
            substitute(expr.right, mapping, old_heap=old_heap),
        )
    if isinstance(expr, Quant):
        bound = {name for name, _ in expr.bound}
        inner = {k: v for k, v in mapping.items() if k not in bound}
        return Quant(expr.kind, expr.bound, substitute(expr.body, inner, old_heap=old_heap))
    raise TypeError(f"not an IVL expression: {expr!r}")


def mentions(expr: Expr, name: str) -> bool:
    return any(isinstance(e, Var) and e.name == name for e in walk(expr))


# Statements


@dataclass(slots=True)
class Obligation:
    """Source-level description of a checked condition."""

    kind: str
    description: str = ""
    span: Span | None = None


@dataclass(slots=True)
class Assign:
    target: str
    value: Expr


@dataclass(slots=True)
class Havoc:
    names: tuple[str, ...]


@dataclass(slots=True)
class Assume:
    expr: Expr


@dataclass(slots=True)
class Assert:
    expr: Expr
    obligation: Obligation


@dataclass(slots=True)
class Call:
    procedure: str
    args: tuple[Expr, ...]
    lhs: tuple[str, ...] = ()
    span: Span | None = None


@dataclass(slots=True)
class If:
    cond: Expr
    then: list[Stmt]
    orelse: list[Stmt] = field(default_factory=list)


@dataclass(slots=True)
class LoopInvariant:
    expr: Expr
    free: bool = False
    obligation: Obligation | None = None


@dataclass(slots=True)
class While:
    cond: Expr
    invariants: list[LoopInvariant]
    body: list[Stmt]
    label: str | None = None


@dataclass(slots=True)
class Block:
    """A labeled block; ``Goto(label)`` inside it jumps to its exit."""

    label: str
    body: list[Stmt]


@dataclass(slots=True)
class Goto:
    label: str


@dataclass(slots=True)
class Return:
    pass


@dataclass(slots=True)
class Break:
    label: str


@dataclass(slots=True)
class Continue:
    label: str


Stmt = Union[Assign, Havoc, Assume, Assert, Call, If, While, Block, Goto, Return, Break, Continue]


# Declarations


@dataclass(slots=True)
class Spec:
    """A requires or ensures clause."""

    expr: Expr
    free: bool = False
    obligation: Obligation | None = None


@dataclass(slots=True)
class TypeDecl:
    name: str
    alias: str | None = None


@dataclass(slots=True)
class ConstDecl:
    name: str
    sort: str
    unique: bool = False


@dataclass(slots=True)
class GlobalVar:
    name: str
    sort: str


@dataclass(slots=True)
class FunctionDecl:
    name: str
    params: tuple[tuple[str, str], ...]
    result: str


@dataclass(slots=True)
class Axiom:
    expr: Expr
    comment: str = ""


@dataclass(slots=True)
class Procedure:
    name: str
    params: list[tuple[str, str]]
    returns: list[tuple[str, str]] = field(default_factory=list)
    requires: list[Spec] = field(default_factory=list)
    ensures: list[Spec] = field(default_factory=list)
    modifies: list[str] = field(default_factory=list)
    span: Span | None = None


@dataclass(slots=True)
class Implementation:
    name: str
    params: list[tuple[str, str]]
    returns: list[tuple[str, str]] = field(default_factory=list)
    locals: list[tuple[str, str]] = field(default_factory=list)
    body: list[Stmt] = field(default_factory=list)


@dataclass(slots=True)
class IvlProgram:
    types: list[TypeDecl] = field(default_factory=list)
    constants: list[ConstDecl] = field(default_factory=list)
    globals: list[GlobalVar] = field(default_factory=list)
    functions: list[FunctionDecl] = field(default_factory=list)
    axioms: list[Axiom] = field(default_factory=list)
    procedures: list[Procedure] = field(default_factory=list)
    implementations: list[Implementation] = field(default_factory=list)

    def procedure(self, name: str) -> Procedure | None:
        for proc in self.procedures:
            if proc.name == name:
                return proc
        return None

    def function(self, name: str) -> FunctionDecl | None:
        for fn in self.functions:
            if fn.name == name:
                return fn
        return None


def walk_stmts(stmts: list[Stmt]):
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, If):
            yield from walk_stmts(stmt.then)
            yield from walk_stmts(stmt.orelse)
        elif isinstance(stmt, (While, Block)):
            yield from walk_stmts(stmt.body)
