"""Ground instances of heap-quantified axioms.

Axioms that quantify over a heap are never handed to the solver as they are.
Each one is matched against the applications of its trigger function that
occur in a verification condition, and only those instances are asserted.
The trigger is the application in the axiom body whose plain variable
arguments cover every bound heap (``post.X.r``, ``pre.X.r``, ``fun.X.r`` and
``$HeapWf``). Bound variables the trigger does not cover stay quantified.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from ..ivl import ast as ivl

# instances may mention further trigger applications; follow them this far
MAX_ROUNDS = 4


@dataclass(frozen=True)
class HeapAxiom:
    axiom: ivl.Axiom
    trigger: ivl.FunApp

    @property
    def quant(self) -> ivl.Quant:
        assert isinstance(self.axiom.expr, ivl.Quant)
        return self.axiom.expr


def quantifies_heap(axiom: ivl.Axiom) -> bool:
    expr = axiom.expr
    return isinstance(expr, ivl.Quant) and any(sort == ivl.HEAP for _, sort in expr.bound)


def _trigger(quant: ivl.Quant) -> ivl.FunApp | None:
    heaps = {name for name, sort in quant.bound if sort == ivl.HEAP}
    bound = {name for name, _ in quant.bound}
    # the symbol an axiom defines takes exactly its bound variables, in order
    exact = tuple(ivl.Var(name) for name, _ in quant.bound)
    best: ivl.FunApp | None = None
    best_score = (False, -1)
    for node in ivl.walk(quant.body):
        if not isinstance(node, ivl.FunApp):
            continue
        direct = {arg.name for arg in node.args if isinstance(arg, ivl.Var) and arg.name in bound}
        if not heaps <= direct:
            continue
        score = (node.args == exact, len(direct))
        if score > best_score:
            best, best_score = node, score
    return best


def heap_axioms(program: ivl.IvlProgram) -> list[HeapAxiom]:
    out = []
    for axiom in program.axioms:
        if not quantifies_heap(axiom):
            continue
        trigger = _trigger(axiom.expr)
        if trigger is None:
            raise ValueError(f"axiom has no heap trigger: {axiom.comment or axiom.expr!r}")
        out.append(HeapAxiom(axiom, trigger))
    return out


def ground_applications(exprs: Iterable[ivl.Expr]) -> set[ivl.FunApp]:
    """Function applications outside any quantifier."""
    found: set[ivl.FunApp] = set()
    stack = list(exprs)
    while stack:
        expr = stack.pop()
        if isinstance(expr, ivl.Quant):
            continue
        if isinstance(expr, ivl.FunApp):
            found.add(expr)
            stack.extend(expr.args)
        elif isinstance(expr, (ivl.Old, ivl.UnOp)):
            stack.append(expr.operand)
        elif isinstance(expr, ivl.MapSelect):
            stack.extend((expr.heap, expr.obj, expr.field))
        elif isinstance(expr, ivl.MapStore):
            stack.extend((expr.heap, expr.obj, expr.field, expr.value))
        elif isinstance(expr, ivl.BinOp):
            stack.extend((expr.left, expr.right))
    return found


def match(pattern: ivl.FunApp, term: ivl.FunApp, bound: set[str]) -> dict[str, ivl.Expr] | None:
    if pattern.name != term.name or len(pattern.args) != len(term.args):
        return None
    binding: dict[str, ivl.Expr] = {}
    for want, got in zip(pattern.args, term.args):
        if isinstance(want, ivl.Var) and want.name in bound:
            if binding.setdefault(want.name, got) != got:
                return None
        elif want != got:
            return None
    return binding


def instance(heap_axiom: HeapAxiom, binding: dict[str, ivl.Expr]) -> ivl.Expr:
    quant = heap_axiom.quant
    body = ivl.substitute(quant.body, binding)
    rest = tuple((name, sort) for name, sort in quant.bound if name not in binding)
    return ivl.Quant(quant.kind, rest, body) if rest else body


def instantiate(axioms: list[HeapAxiom], exprs: Iterable[ivl.Expr]) -> list[tuple[str, ivl.Expr]]:
    """``(comment, instance)`` pairs for every trigger application reachable from ``exprs``."""
    by_name: dict[str, list[HeapAxiom]] = {}
    for heap_axiom in axioms:
        by_name.setdefault(heap_axiom.trigger.name, []).append(heap_axiom)
    seen: set[ivl.FunApp] = set()
    pending = ground_applications(exprs)
    out: list[tuple[str, ivl.Expr]] = []
    for _ in range(MAX_ROUNDS):
        fresh = sorted((app for app in pending - seen if app.name in by_name), key=repr)
        if not fresh:
            break
        seen.update(fresh)
        produced = []
        for app in fresh:
            for heap_axiom in by_name[app.name]:
                bound = {name for name, _ in heap_axiom.quant.bound}
                binding = match(heap_axiom.trigger, app, bound)
                if binding is None:
                    continue
                expr = instance(heap_axiom, binding)
                out.append((heap_axiom.axiom.comment, expr))
                produced.append(expr)
        pending = ground_applications(produced)
    return out
