"""Translation of Lite-Eiffel expressions into IVL expressions over ``Heap``."""

from __future__ import annotations

from ..errors import VerifierError
from ..frontend import ast as src
from ..frontend.printer import format_expr
from ..ivl import ast as ivl
from .context import ExprEnv, TranslationContext, field_name, fun_name, sort_of, unbox

_BINOPS = {
    "+": "+",
    "-": "-",
    "*": "*",
    "<": "<",
    "<=": "<=",
    ">": ">",
    ">=": ">=",
    "=": "==",
    "/=": "!=",
    "and": "&&",
    "or": "||",
    "implies": "==>",
}


def translate_expr(expr: src.Expr, ctx: TranslationContext, env: ExprEnv) -> ivl.Expr:
    if isinstance(expr, src.IntLit):
        return ivl.IntLit(expr.value)
    if isinstance(expr, src.BoolLit):
        return ivl.BoolLit(expr.value)
    if isinstance(expr, src.VoidLit):
        return ivl.Var(ivl.VOID)
    if isinstance(expr, src.CurrentRef):
        return env.current
    if isinstance(expr, src.ResultRef):
        if env.result is None:
            raise VerifierError("Result is not available here", span=expr.span)
        return env.result
    if isinstance(expr, src.ExcVRef):
        return env.excv
    if isinstance(expr, src.Old):
        return ivl.Old(translate_expr(expr.operand, ctx, env))
    if isinstance(expr, src.Unary):
        operand = translate_expr(expr.operand, ctx, env)
        return ivl.not_(operand) if expr.op == "not" else ivl.UnOp("-", operand)
    if isinstance(expr, src.Binary):
        left = translate_expr(expr.left, ctx, env)
        right = translate_expr(expr.right, ctx, env)
        return ivl.BinOp(_BINOPS[expr.op], left, right)
    if isinstance(expr, src.Access):
        return _translate_access(expr, ctx, env)
    raise VerifierError(f"cannot translate expression {expr!r}")


def _translate_access(expr: src.Access, ctx: TranslationContext, env: ExprEnv) -> ivl.Expr:
    if expr.kind in {"local", "formal"}:
        return env.names.get(expr.name, ivl.Var(expr.name))
    target = env.current if expr.target is None else translate_expr(expr.target, ctx, env)
    if expr.kind == "attribute":
        assert expr.owner is not None
        return unbox(ivl.select(env.heap, target, field_name(expr.owner, expr.name)), sort_of(expr.ty))
    if expr.kind == "call":
        assert expr.owner is not None
        if not ctx.is_pure(expr.owner, expr.name):
            raise VerifierError(f"call to impure routine {expr.owner}.{expr.name} inside an expression", span=expr.span)
        args = tuple(translate_expr(arg, ctx, env) for arg in expr.args or ())
        return ivl.FunApp(fun_name(expr.owner, expr.name), (env.heap, target, *args))
    raise VerifierError(f"unresolved name {expr.name}", span=expr.span)


def mentions_excv(expr: src.Expr) -> bool:
    return any(isinstance(node, src.ExcVRef) for node in src.walk_expr(expr))


def clause_text(clause: src.Clause) -> str:
    text = format_expr(clause.expr)
    return f"{clause.tag}: {text}" if clause.tag else text


def translate_postcondition(clause: src.Clause, ctx: TranslationContext, env: ExprEnv) -> ivl.Expr:
    """A clause mentioning ExcV holds on both exits; any other one only on normal termination."""
    expr = translate_expr(clause.expr, ctx, env)
    if mentions_excv(clause.expr):
        return expr
    return ivl.implies(ivl.not_(env.excv), expr)


def conjunction(clauses: list[src.Clause], ctx: TranslationContext, env: ExprEnv) -> ivl.Expr:
    return ivl.and_(*(translate_expr(clause.expr, ctx, env) for clause in clauses))
