"""Exception plumbing: the ``ExcV`` checks and the rescue/retry loop.

A routine body with rescue clause and rescue invariant ``I`` becomes::

    <body with exceptions jumping to excL>
  excL:
    while (ExcV) invariant I;
    {
      ExcV := false; Retry := false;
      <rescue with exceptions jumping to endL>
      if (!Retry) { ExcV := true; assert I; goto endL; }
      <body with exceptions jumping to excL>
    }
  endL:
"""

from __future__ import annotations

from collections.abc import Callable

from ..errors import MissingRescueInvariant
from ..frontend import ast as src
from ..ivl import ast as ivl

END_LABEL = "endL"
EXC_LABEL = "excL"

StmtTranslator = Callable[[list[src.Stmt], str], list[ivl.Stmt]]


def may_raise(stmt: ivl.Stmt) -> bool:
    if isinstance(stmt, ivl.Call):
        return True
    return isinstance(stmt, ivl.Assign) and stmt.target == ivl.EXCV_VAR and stmt.value != ivl.FALSE


def exception_check(stmt: ivl.Stmt, label: str) -> list[ivl.Stmt]:
    """``stmt`` followed by a jump to ``label`` when it may leave an exception pending."""
    if may_raise(stmt):
        return [stmt, ivl.If(ivl.Var(ivl.EXCV_VAR), [ivl.Goto(label)])]
    return [stmt]


def _has_jump(stmts: list[ivl.Stmt]) -> bool:
    return any(isinstance(stmt, ivl.Goto) for stmt in ivl.walk_stmts(stmts))


def translate_body(
    body: list[src.Stmt],
    rescue: list[src.Stmt] | None,
    rescue_invariant: list[ivl.LoopInvariant],
    translate: StmtTranslator,
    *,
    routine: str,
    span: src.Span | None = None,
    loop_extras: Callable[[list[ivl.Stmt]], list[ivl.LoopInvariant]] | None = None,
) -> list[ivl.Stmt]:
    if rescue is None:
        stmts = translate(body, END_LABEL)
        if _has_jump(stmts):
            return [ivl.Block(END_LABEL, stmts)]
        return stmts
    if not rescue_invariant:
        raise MissingRescueInvariant(routine, span=span)
    excv = ivl.Var(ivl.EXCV_VAR)
    failure_checks = [
        ivl.Assert(
            inv.expr,
            ivl.Obligation(
                ivl.ASSERT,
                f"rescue invariant at failure exit: {inv.obligation.description}" if inv.obligation else "",
                inv.obligation.span if inv.obligation else span,
            ),
        )
        for inv in rescue_invariant
    ]
    retry_body: list[ivl.Stmt] = [
        ivl.Assign(ivl.EXCV_VAR, ivl.FALSE),
        ivl.Assign(ivl.RETRY_VAR, ivl.FALSE),
        *translate(rescue, END_LABEL),
        ivl.If(
            ivl.not_(ivl.Var(ivl.RETRY_VAR)),
            [ivl.Assign(ivl.EXCV_VAR, ivl.TRUE), *failure_checks, ivl.Goto(END_LABEL)],
        ),
        *translate(body, EXC_LABEL),
    ]
    invariants = [*rescue_invariant, *(loop_extras(retry_body) if loop_extras else [])]
    return [
        ivl.Block(
            END_LABEL,
            [
                ivl.Block(EXC_LABEL, translate(body, EXC_LABEL)),
                ivl.While(excv, invariants, retry_body, label=EXC_LABEL),
            ],
        )
    ]
