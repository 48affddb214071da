"""Structured views of IVL bodies.

``to_structured`` resolves every ``goto`` into a labeled ``break`` (exit of an
enclosing block) or ``continue`` (head of an enclosing loop). ``skeleton``
renders a body as an indented statement-kind tree with canonical label names,
which is what golden-file comparisons use.
"""

from __future__ import annotations

from ..errors import WellFormednessError
from .ast import (
    Assert,
    Assign,
    Assume,
    Block,
    Break,
    Call,
    Continue,
    Goto,
    Havoc,
    If,
    Return,
    Stmt,
    While,
)


def to_structured(body: list[Stmt]) -> list[Stmt]:
    return _structure(body, [])


def _structure(stmts: list[Stmt], enclosing: list[tuple[str, str]]) -> list[Stmt]:
    out: list[Stmt] = []
    for stmt in stmts:
        if isinstance(stmt, Goto):
            out.append(_resolve(stmt.label, enclosing))
        elif isinstance(stmt, If):
            out.append(If(stmt.cond, _structure(stmt.then, enclosing), _structure(stmt.orelse, enclosing)))
        elif isinstance(stmt, Block):
            out.append(Block(stmt.label, _structure(stmt.body, [*enclosing, ("block", stmt.label)])))
        elif isinstance(stmt, While):
            inner = [*enclosing, ("loop", stmt.label)] if stmt.label else enclosing
            out.append(While(stmt.cond, stmt.invariants, _structure(stmt.body, inner), stmt.label))
        elif isinstance(stmt, Break):
            if ("block", stmt.label) not in enclosing:
                raise WellFormednessError(f"break {stmt.label} outside its block", node=stmt.label)
            out.append(stmt)
        elif isinstance(stmt, Continue):
            if ("loop", stmt.label) not in enclosing:
                raise WellFormednessError(f"continue {stmt.label} outside its loop", node=stmt.label)
            out.append(stmt)
        else:
            out.append(stmt)
    return out


def _resolve(label: str, enclosing: list[tuple[str, str]]) -> Stmt:
    for kind, name in reversed(enclosing):
        if name == label:
            return Break(label) if kind == "block" else Continue(label)
    raise WellFormednessError(f"goto {label} has no enclosing target", node=label)


class _Labels:
    def __init__(self) -> None:
        self.names: dict[str, str] = {}

    def __call__(self, label: str | None) -> str:
        if label is None:
            return "-"
        if label not in self.names:
            self.names[label] = f"L{len(self.names) + 1}"
        return self.names[label]


def skeleton(body: list[Stmt]) -> str:
    """Statement-kind tree of ``body`` with labels renamed in order of appearance."""
    labels = _Labels()
    lines: list[str] = []
    _skeleton(body, 0, labels, lines)
    return "\n".join(lines) + "\n"


def _skeleton(stmts: list[Stmt], depth: int, labels: _Labels, lines: list[str]) -> None:
    pad = "  " * depth
    for stmt in stmts:
        if isinstance(stmt, Assign):
            lines.append(f"{pad}assign {stmt.target}")
        elif isinstance(stmt, Havoc):
            lines.append(f"{pad}havoc {', '.join(stmt.names)}")
        elif isinstance(stmt, Assume):
            lines.append(f"{pad}assume")
        elif isinstance(stmt, Assert):
            lines.append(f"{pad}assert {stmt.obligation.kind}")
        elif isinstance(stmt, Call):
            lines.append(f"{pad}call {stmt.procedure}")
        elif isinstance(stmt, If):
            lines.append(f"{pad}if")
            _skeleton(stmt.then, depth + 1, labels, lines)
            if stmt.orelse:
                lines.append(f"{pad}else")
                _skeleton(stmt.orelse, depth + 1, labels, lines)
        elif isinstance(stmt, Block):
            lines.append(f"{pad}block {labels(stmt.label)}")
            _skeleton(stmt.body, depth + 1, labels, lines)
        elif isinstance(stmt, While):
            checked = sum(1 for inv in stmt.invariants if not inv.free)
            lines.append(f"{pad}while {labels(stmt.label)} invariants={checked}")
            _skeleton(stmt.body, depth + 1, labels, lines)
        elif isinstance(stmt, Goto):
            lines.append(f"{pad}goto {labels(stmt.label)}")
        elif isinstance(stmt, Break):
            lines.append(f"{pad}break {labels(stmt.label)}")
        elif isinstance(stmt, Continue):
            lines.append(f"{pad}continue {labels(stmt.label)}")
        elif isinstance(stmt, Return):
            lines.append(f"{pad}return")
