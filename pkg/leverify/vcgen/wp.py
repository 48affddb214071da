"""Weakest preconditions over passive bodies, one VC per assertion."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

from ..frontend.ast import Span
from ..ivl import ast as ivl
from .passify import PassiveBody, PAssert, PAssume, PBlock, PBreak, PChoice, PStmt, passify

logger = logging.getLogger(__name__)

# straight-line runs longer than this get a named continuation
_CHUNK = 48


@dataclass
class VerificationCondition:
    procedure: str
    kind: str
    index: int
    description: str
    span: Span | None
    goal: ivl.Expr
    definitions: list[tuple[str, ivl.Expr]] = field(default_factory=list)
    variables: dict[str, str] = field(default_factory=dict)
    program: ivl.IvlProgram | None = field(default=None, repr=False, compare=False)

    @property
    def id(self) -> str:
        return f"{self.procedure}.{self.kind}.{self.index}"

    @property
    def filename(self) -> str:
        return f"{self.id}.smt2"


class _Wp:
    def __init__(self, target: int) -> None:
        self.target = target
        self.definitions: list[tuple[str, ivl.Expr]] = []

    def name(self, post: ivl.Expr) -> ivl.Expr:
        if isinstance(post, (ivl.BoolLit, ivl.Var)):
            return post
        name = f"$k{len(self.definitions)}"
        self.definitions.append((name, post))
        return ivl.Var(name)

    def seq(self, stmts: list[PStmt], post: ivl.Expr, exits: dict[str, ivl.Expr]) -> ivl.Expr:
        for position, stmt in enumerate(reversed(stmts), 1):
            post = self.stmt(stmt, post, exits)
            if position % _CHUNK == 0:
                post = self.name(post)
        return post

    def stmt(self, stmt: PStmt, post: ivl.Expr, exits: dict[str, ivl.Expr]) -> ivl.Expr:
        if isinstance(stmt, PAssume):
            return ivl.implies(stmt.expr, post)
        if isinstance(stmt, PAssert):
            if stmt.index == self.target:
                return ivl.and_(stmt.expr, post)
            return ivl.implies(stmt.expr, post)
        if isinstance(stmt, PChoice):
            join = self.name(post)
            return ivl.and_(*(self.seq(branch, join, exits) for branch in stmt.branches))
        if isinstance(stmt, PBlock):
            exit_ = self.name(post)
            return self.seq(stmt.body, exit_, {**exits, stmt.label: exit_})
        if isinstance(stmt, PBreak):
            return self.seq(stmt.joins, exits[stmt.label], exits)
        raise TypeError(f"not a passive statement: {stmt!r}")


def vc_for(passive: PassiveBody, check: PAssert) -> tuple[ivl.Expr, list[tuple[str, ivl.Expr]]]:
    """Goal and named continuations for ``check``; every other assertion is assumed."""
    wp = _Wp(check.index)
    goal = wp.seq(passive.body, ivl.TRUE, {})
    return goal, wp.definitions


def generate_vcs(program: ivl.IvlProgram) -> list[VerificationCondition]:
    vcs: list[VerificationCondition] = []
    for impl in program.implementations:
        passive = passify(program, impl)
        numbering: Counter[str] = Counter()
        for check in passive.asserts:
            goal, definitions = vc_for(passive, check)
            kind = check.obligation.kind
            numbering[kind] += 1
            vcs.append(
                VerificationCondition(
                    procedure=impl.name,
                    kind=kind,
                    index=numbering[kind],
                    description=check.obligation.description,
                    span=check.obligation.span,
                    goal=goal,
                    definitions=definitions,
                    variables=passive.variables,
                    program=program,
                )
            )
        logger.debug("%s: %d obligation(s)", impl.name, len(passive.asserts))
    return vcs
