"""Routine calls and object creation."""

from __future__ import annotations

from ..frontend.ast import Span
from ..ivl import ast as ivl
from .context import TranslationContext, allocated, box, proc_name
from .exceptions import exception_check
from .inheritance import invariant_clauses


def translate_call(
    ctx: TranslationContext,
    target: ivl.Expr,
    static_class: str,
    owner: str,
    routine: str,
    args: tuple[ivl.Expr, ...],
    label: str,
    *,
    lhs: tuple[str, ...] = (),
    span: Span | None = None,
) -> list[ivl.Stmt]:
    """Call against the static type's procedure.

    The receiver's dynamic type is assumed to conform to the static type; in
    dynamic mode the callee's free ``post`` ensures together with the
    inheritance axioms then yield the descendant's contract.
    """
    stmts: list[ivl.Stmt] = []
    if target != ivl.Var(ivl.CURRENT):
        stmts.append(ivl.Assume(ivl.subtype(ivl.type_of(target), ivl.Var(static_class))))
    call = ivl.Call(proc_name(owner, routine), (target, *args), lhs, span=span)
    stmts.extend(exception_check(call, label))
    return stmts


def translate_creation(
    ctx: TranslationContext,
    var: str,
    class_name: str,
    routine: str | None,
    routine_owner: str | None,
    args: tuple[ivl.Expr, ...],
    label: str,
    *,
    span: Span | None = None,
) -> list[ivl.Stmt]:
    """Allocate a fresh object of ``class_name`` into ``var`` and run its creation procedure."""
    heap = ivl.Var(ivl.HEAP_VAR)
    obj = ivl.Var(var)
    stmts: list[ivl.Stmt] = [
        ivl.Havoc((var,)),
        ivl.Assume(ivl.and_(ivl.BinOp("!=", obj, ivl.Var(ivl.VOID)), ivl.not_(allocated(heap, obj)))),
        ivl.Assign(ivl.HEAP_VAR, ivl.MapStore(heap, obj, ivl.Var(ivl.ALLOCATED), box(ivl.TRUE, ivl.BOOL))),
        ivl.Assume(ivl.eq(ivl.type_of(obj), ivl.Var(class_name))),
    ]
    if routine is None:
        return stmts
    call = ivl.Call(proc_name(routine_owner or class_name, routine), (obj, *args), span=span)
    stmts.extend(exception_check(call, label))
    invariant = [expr for _, expr in invariant_clauses(ctx, class_name, obj)]
    if invariant:
        stmts.append(ivl.Assume(ivl.and_(*invariant)))
    return stmts
