"""Purity analysis.

A routine is required to be pure when it is called inside any expression,
when it is declared ``pure``, when it redefines a required-pure routine, or
when a required-pure routine calls it. Required-pure routines may not assign
attributes or create objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PurityError, PurityFailed
from ..frontend import ast as src
from ..frontend.typecheck import TypedProgram


@dataclass(frozen=True)
class PurityTable:
    required: frozenset[tuple[str, str]] = frozenset()

    def is_pure(self, owner: str, routine: str) -> bool:
        return (owner, routine) in self.required


def _nested_calls(expr: src.Expr, *, top_level: bool = False):
    nodes = src.walk_expr(expr)
    if top_level and isinstance(expr, src.Access) and expr.kind == "call":
        next(nodes)
    for node in nodes:
        if isinstance(node, src.Access) and node.kind == "call" and node.owner is not None:
            yield node.owner, node.name


def _statement_calls(stmt: src.Stmt):
    """Routines a statement invokes as procedures."""
    if isinstance(stmt, src.CallStmt) and stmt.call.owner is not None:
        yield stmt.call.owner, stmt.call.name
    elif isinstance(stmt, src.Assign) and isinstance(stmt.value, src.Access) and stmt.value.kind == "call":
        if stmt.value.owner is not None:
            yield stmt.value.owner, stmt.value.name
    elif isinstance(stmt, src.Create) and stmt.routine_owner and stmt.routine:
        yield stmt.routine_owner, stmt.routine


def _expression_seeds(typed: TypedProgram) -> set[tuple[str, str]]:
    seeds: set[tuple[str, str]] = set()
    for cls in typed.source.classes:
        for clause in cls.invariant:
            seeds.update(_nested_calls(clause.expr))
        for routine in cls.routines:
            contract = routine.contract
            for clause in [
                *contract.require,
                *contract.require_else,
                *contract.ensure,
                *contract.ensure_then,
                *contract.rescue_invariant,
            ]:
                seeds.update(_nested_calls(clause.expr))
            if routine.pure:
                seeds.add((cls.name, routine.name))
            for stmt in src.walk_stmts([*(routine.body or []), *(routine.rescue or [])]):
                top_level = isinstance(stmt, (src.CallStmt, src.Assign))
                for expr in src.stmt_exprs(stmt):
                    seeds.update(_nested_calls(expr, top_level=top_level))
    return seeds


def _redefinitions(typed: TypedProgram, owner: str, name: str) -> list[tuple[str, str]]:
    return [(cls, name) for cls in typed.descendants(owner) if typed.classes[cls].routine(name) is not None]


def check_purity(typed: TypedProgram) -> PurityTable:
    """Compute the required-pure routines; raises PurityFailed listing every violation."""
    required: set[tuple[str, str]] = set()
    pending = sorted(_expression_seeds(typed))
    while pending:
        site = pending.pop()
        if site in required:
            continue
        required.add(site)
        owner, name = site
        for other in _redefinitions(typed, owner, name):
            if other not in required:
                pending.append(other)
        routine = typed.classes[owner].routine(name)
        if routine is None:
            continue
        for stmt in src.walk_stmts([*(routine.body or []), *(routine.rescue or [])]):
            for callee in _statement_calls(stmt):
                if callee not in required:
                    pending.append(callee)

    errors: list[PurityError] = []
    for owner, name in sorted(required):
        routine = typed.classes[owner].routine(name)
        if routine is None:
            continue
        where = f"{owner}.{name}"
        for stmt in src.walk_stmts([*(routine.body or []), *(routine.rescue or [])]):
            if isinstance(stmt, src.Assign) and stmt.target_kind == "attribute":
                errors.append(PurityError(where, f"assigns attribute {stmt.target}", span=stmt.span))
            elif isinstance(stmt, src.Create):
                errors.append(PurityError(where, f"creates an object of class {stmt.class_name}", span=stmt.span))
    if errors:
        raise PurityFailed(errors)
    return PurityTable(frozenset(required))
