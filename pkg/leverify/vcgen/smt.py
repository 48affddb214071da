"""SMT-LIB2 rendering of verification conditions."""

from __future__ import annotations

import re
from collections import defaultdict

from ..ivl import ast as ivl
from .instantiate import heap_axioms, instantiate, quantifies_heap
from .wp import VerificationCondition

SUBTYPE_FN = "$subtype"
LOGIC = "ALL"

_BUILTIN_SORTS = {
    ivl.BOOL: "Bool",
    ivl.INT: "Int",
    ivl.REF: "Ref",
    ivl.FIELD: "Field",
    ivl.TYPENAME: "TypeName",
    ivl.VALUE: "Value",
    ivl.HEAP: "(Array Ref (Array Field Value))",
}
_UNINTERPRETED = ("Ref", "Field", "TypeName")
_INJECTION_NAMES = frozenset(name for _, into, out in ivl.VALUE_INJECTIONS for name in (into, out))
_SIMPLE = re.compile(r"[A-Za-z~!$%^&*_+=<>.?/\-][A-Za-z0-9~!@$%^&*_+=<>.?/\-]*")
_RESERVED = frozenset(
    {
        "and", "or", "not", "=>", "ite", "true", "false", "forall", "exists", "let", "distinct",
        "select", "store", "as", "par", "_", "!", "Int", "Bool", "Array", "div", "mod", "abs",
    }
)
_BINARY = {
    "&&": "and",
    "||": "or",
    "==>": "=>",
    "<==>": "=",
    "==": "=",
    "+": "+",
    "-": "-",
    "*": "*",
    "<": "<",
    "<=": "<=",
    ">": ">",
    ">=": ">=",
    "<:": SUBTYPE_FN,
}


def smt_sort(sort: str) -> str:
    return _BUILTIN_SORTS.get(sort, symbol(sort))


def symbol(name: str) -> str:
    if _SIMPLE.fullmatch(name) and name not in _RESERVED:
        return name
    return f"|{name}|"


def term(expr: ivl.Expr) -> str:
    if isinstance(expr, ivl.BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, ivl.IntLit):
        return str(expr.value) if expr.value >= 0 else f"(- {-expr.value})"
    if isinstance(expr, ivl.Var):
        return symbol(expr.name)
    if isinstance(expr, ivl.FunApp):
        if not expr.args:
            return symbol(expr.name)
        return f"({symbol(expr.name)} {' '.join(term(arg) for arg in expr.args)})"
    if isinstance(expr, ivl.MapSelect):
        return f"(select (select {term(expr.heap)} {term(expr.obj)}) {term(expr.field)})"
    if isinstance(expr, ivl.MapStore):
        heap, obj = term(expr.heap), term(expr.obj)
        return f"(store {heap} {obj} (store (select {heap} {obj}) {term(expr.field)} {term(expr.value)}))"
    if isinstance(expr, ivl.UnOp):
        return f"({'not' if expr.op == '!' else '-'} {term(expr.operand)})"
    if isinstance(expr, ivl.BinOp):
        if expr.op == "!=":
            return f"(not (= {term(expr.left)} {term(expr.right)}))"
        return f"({_BINARY[expr.op]} {term(expr.left)} {term(expr.right)})"
    if isinstance(expr, ivl.Quant):
        bound = " ".join(f"({symbol(name)} {smt_sort(sort)})" for name, sort in expr.bound)
        return f"({expr.kind} ({bound}) {term(expr.body)})"
    if isinstance(expr, ivl.Old):
        raise ValueError("old() must be eliminated before SMT emission")
    raise TypeError(f"not an IVL expression: {expr!r}")


def _value_datatype() -> str:
    constructors = " ".join(
        f"({symbol(into)} ({symbol(out)} {smt_sort(sort)}))" for sort, into, out in ivl.VALUE_INJECTIONS
    )
    return f"(declare-datatypes (({smt_sort(ivl.VALUE)} 0)) (({constructors})))"


def _datatype_fact(axiom: ivl.Axiom) -> bool:
    """True for axioms about the injections alone, which the Value datatype already guarantees."""
    names = {node.name for node in ivl.walk(axiom.expr) if isinstance(node, ivl.FunApp)}
    return bool(names) and names <= _INJECTION_NAMES


def declarations(program: ivl.IvlProgram) -> list[str]:
    """Sorts, symbols and heap-free axioms of ``program``, shared by all its VCs."""
    lines = [f"(declare-sort {name} 0)" for name in _UNINTERPRETED]
    lines.append(_value_datatype())
    for decl in program.types:
        if decl.name not in _BUILTIN_SORTS:
            if decl.alias is None:
                lines.append(f"(declare-sort {symbol(decl.name)} 0)")
            else:
                lines.append(f"(define-sort {symbol(decl.name)} () {smt_sort(decl.alias)})")
    lines.append(f"(declare-fun {SUBTYPE_FN} (TypeName TypeName) Bool)")
    unique: dict[str, list[str]] = defaultdict(list)
    for const in program.constants:
        lines.append(f"(declare-const {symbol(const.name)} {smt_sort(const.sort)})")
        if const.unique:
            unique[const.sort].append(symbol(const.name))
    for sort in sorted(unique):
        if len(unique[sort]) > 1:
            lines.append(f"(assert (distinct {' '.join(unique[sort])}))")
    for fn in program.functions:
        if fn.name in _INJECTION_NAMES:
            continue
        params = " ".join(smt_sort(sort) for _, sort in fn.params)
        lines.append(f"(declare-fun {symbol(fn.name)} ({params}) {smt_sort(fn.result)})")
    for axiom in program.axioms:
        if quantifies_heap(axiom) or _datatype_fact(axiom):
            continue
        if axiom.comment:
            lines.append(f"; {axiom.comment}")
        lines.append(f"(assert {term(axiom.expr)})")
    return lines


def emit_smt(vc: VerificationCondition) -> str:
    description = " ".join(vc.description.split())
    lines = [
        f"; {vc.id}",
        f"; {description}" if description else f"; {vc.kind}",
        "(set-option :produce-models true)",
        f"(set-logic {LOGIC})",
    ]
    if vc.program is not None:
        lines.extend(declarations(vc.program))
    else:
        lines.extend(f"(declare-sort {name} 0)" for name in _UNINTERPRETED)
        lines.append(_value_datatype())
    for name in sorted(vc.variables):
        lines.append(f"(declare-const {symbol(name)} {smt_sort(vc.variables[name])})")
    if vc.program is not None:
        ground = [vc.goal, *(body for _, body in vc.definitions)]
        for comment, fact in instantiate(heap_axioms(vc.program), ground):
            if comment:
                lines.append(f"; {comment}")
            lines.append(f"(assert {term(fact)})")
    for name, body in vc.definitions:
        lines.append(f"(define-fun {symbol(name)} () Bool {term(body)})")
    lines.append(f"(assert (not {term(vc.goal)}))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
