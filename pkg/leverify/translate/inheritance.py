"""Contracts under inheritance.

Each declaration site ``X.r`` gets a two-heap predicate ``post.X.r`` with one
axiom per descendant ``Y`` of ``X``: when the receiver's dynamic type conforms
to ``Y``, the predicate implies ``Y``'s cumulative postcondition. Preconditions
use the mirrored predicate ``pre.X.r``, implied by each descendant's cumulative
precondition. Pure functions get ``fun.X.r`` with definition axioms built the
same way.
"""

from __future__ import annotations

from ..frontend import ast as src
from ..ivl import ast as ivl
from .context import (
    ExprEnv,
    TranslationContext,
    fresh_name,
    fun_name,
    post_name,
    pre_name,
    sort_of,
)
from .expressions import conjunction, translate_expr, translate_postcondition


def version_env(
    routine: src.RoutineDecl,
    current: ivl.Expr,
    args: list[ivl.Expr],
    *,
    result: ivl.Expr | None = None,
    excv: ivl.Expr | None = None,
    heap: ivl.Expr | None = None,
) -> ExprEnv:
    env = ExprEnv(current=current, names={f.name: a for f, a in zip(routine.formals, args)}, result=result)
    if excv is not None:
        env.excv = excv
    if heap is not None:
        env.heap = heap
    return env


def cumulative_pre(ctx: TranslationContext, cls: str, name: str, current: ivl.Expr, args: list[ivl.Expr]) -> ivl.Expr:
    """Original precondition, weakened by every ``require else`` down to ``cls``."""
    disjuncts = []
    for index, (routine, _) in enumerate(ctx.typed.versions(cls, name)):
        env = version_env(routine, current, args)
        clauses = routine.contract.require if index == 0 else routine.contract.require_else
        if index == 0 or clauses:
            disjuncts.append(conjunction(clauses, ctx, env))
    return ivl.or_(*disjuncts)


def has_weakening(ctx: TranslationContext, cls: str, name: str) -> bool:
    return any(routine.contract.require_else for routine, _ in ctx.typed.versions(cls, name))


def cumulative_post_clauses(ctx: TranslationContext, cls: str, name: str) -> list[tuple[src.RoutineDecl, src.Clause]]:
    """Every ensure clause in force for the version of ``name`` in ``cls``."""
    clauses = []
    for routine, _ in ctx.typed.versions(cls, name):
        for clause in [*routine.contract.ensure, *routine.contract.ensure_then]:
            clauses.append((routine, clause))
    return clauses


def normal_post(
    ctx: TranslationContext,
    cls: str,
    name: str,
    current: ivl.Expr,
    args: list[ivl.Expr],
    result: ivl.Expr | None,
) -> ivl.Expr:
    """Cumulative postcondition of ``cls``'s version on normal termination (ExcV is false)."""
    parts = []
    for routine, clause in cumulative_post_clauses(ctx, cls, name):
        env = version_env(routine, current, args, result=result, excv=ivl.FALSE)
        parts.append(translate_postcondition(clause, ctx, env))
    return ivl.and_(*parts)


def _bound_names(routine: src.RoutineDecl, *bases: str) -> tuple[list[str], list[str]]:
    taken = {f.name for f in routine.formals}
    names = []
    for base in bases:
        name = fresh_name(base, taken)
        taken.add(name)
        names.append(name)
    return names, [f.name for f in routine.formals]


def _guard(c: ivl.Expr, cls: str) -> ivl.Expr:
    return ivl.subtype(ivl.type_of(c), ivl.Var(cls))


def _in_heaps(expr: ivl.Expr, h1: ivl.Expr, h2: ivl.Expr) -> ivl.Expr:
    return ivl.substitute(expr, {ivl.HEAP_VAR: h1}, old_heap=h2)


def post_predicate(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> ivl.FunctionDecl:
    (h1, h2, c, res), formals = _bound_names(routine, "h1", "h2", "c", "res")
    params = [(h1, ivl.HEAP), (h2, ivl.HEAP), (c, ivl.REF)]
    params += [(name, sort_of(f.type_name)) for name, f in zip(formals, routine.formals)]
    if routine.result_type is not None:
        params.append((res, sort_of(routine.result_type)))
    return ivl.FunctionDecl(post_name(owner, routine.name), tuple(params), ivl.BOOL)


def pre_predicate(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> ivl.FunctionDecl:
    (h, c), formals = _bound_names(routine, "h", "c")
    params = [(h, ivl.HEAP), (c, ivl.REF)]
    params += [(name, sort_of(f.type_name)) for name, f in zip(formals, routine.formals)]
    return ivl.FunctionDecl(pre_name(owner, routine.name), tuple(params), ivl.BOOL)


def function_symbol(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> ivl.FunctionDecl:
    (h, c), formals = _bound_names(routine, "h", "c")
    params = [(h, ivl.HEAP), (c, ivl.REF)]
    params += [(name, sort_of(f.type_name)) for name, f in zip(formals, routine.formals)]
    return ivl.FunctionDecl(fun_name(owner, routine.name), tuple(params), sort_of(routine.result_type))


def _post_axioms(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> list[ivl.Axiom]:
    decl = post_predicate(ctx, owner, routine)
    bound = decl.params
    h1, h2, c = (ivl.Var(name) for name, _ in bound[:3])
    args = [ivl.Var(name) for name, _ in bound[3 : 3 + len(routine.formals)]]
    res = ivl.Var(bound[-1][0]) if routine.result_type is not None else None
    app = ivl.FunApp(decl.name, tuple(ivl.Var(name) for name, _ in bound))
    axioms = []
    for descendant in ctx.typed.descendants(owner):
        consequent = _in_heaps(normal_post(ctx, descendant, routine.name, c, args, res), h1, h2)
        body = ivl.BinOp("==>", _guard(c, descendant), ivl.BinOp("==>", app, consequent))
        axioms.append(ivl.Axiom(ivl.Quant("forall", bound, body), f"{decl.name} in {descendant}"))
    return axioms


def _pre_axioms(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> list[ivl.Axiom]:
    decl = pre_predicate(ctx, owner, routine)
    bound = decl.params
    h, c = ivl.Var(bound[0][0]), ivl.Var(bound[1][0])
    args = [ivl.Var(name) for name, _ in bound[2:]]
    app = ivl.FunApp(decl.name, tuple(ivl.Var(name) for name, _ in bound))
    axioms = []
    for descendant in ctx.typed.descendants(owner):
        antecedent = ivl.substitute(cumulative_pre(ctx, descendant, routine.name, c, args), {ivl.HEAP_VAR: h})
        body = ivl.BinOp("==>", _guard(c, descendant), ivl.BinOp("==>", antecedent, app))
        axioms.append(ivl.Axiom(ivl.Quant("forall", bound, body), f"{decl.name} in {descendant}"))
    return axioms


def function_axioms(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> list[ivl.Axiom]:
    """Definition axioms of ``fun.X.r``; only ``X`` itself in static_only mode."""
    decl = function_symbol(ctx, owner, routine)
    bound = decl.params
    h, c = ivl.Var(bound[0][0]), ivl.Var(bound[1][0])
    args = [ivl.Var(name) for name, _ in bound[2:]]
    app = ivl.FunApp(decl.name, tuple(ivl.Var(name) for name, _ in bound))
    classes = ctx.typed.descendants(owner) if ctx.dynamic else [owner]
    axioms = []
    for descendant in classes:
        pre = ivl.substitute(cumulative_pre(ctx, descendant, routine.name, c, args), {ivl.HEAP_VAR: h})
        post = _in_heaps(normal_post(ctx, descendant, routine.name, c, args, app), h, h)
        body = ivl.BinOp("==>", _guard(c, descendant), ivl.BinOp("==>", pre, post))
        axioms.append(ivl.Axiom(ivl.Quant("forall", bound, body), f"{decl.name} in {descendant}"))
    return axioms


def generate_inheritance_axioms(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> list[ivl.Axiom]:
    """Post- and precondition axioms for the declaration of ``routine`` in ``owner``.

    Empty in static_only mode.
    """
    if not ctx.dynamic:
        return []
    return [*_post_axioms(ctx, owner, routine), *_pre_axioms(ctx, owner, routine)]


def predicate_declarations(ctx: TranslationContext, owner: str, routine: src.RoutineDecl) -> list[ivl.FunctionDecl]:
    decls = []
    if ctx.dynamic:
        decls.append(post_predicate(ctx, owner, routine))
        decls.append(pre_predicate(ctx, owner, routine))
    if ctx.has_function(owner, routine):
        decls.append(function_symbol(ctx, owner, routine))
    return decls


def invariant_clauses(ctx: TranslationContext, cls: str, obj: ivl.Expr) -> list[tuple[src.Clause, ivl.Expr]]:
    """Class invariant of ``cls`` (ancestors' clauses included) for object ``obj``."""
    env = ExprEnv(current=obj)
    clauses = []
    for name in reversed(ctx.typed.ancestors(cls)):
        for clause in ctx.typed.classes[name].invariant:
            clauses.append((clause, translate_expr(clause.expr, ctx, env)))
    return clauses


def inheriting_invariants(
    ctx: TranslationContext, cls: str, name: str, obj: ivl.Expr
) -> list[tuple[str, src.Clause, ivl.Expr]]:
    """Invariant clauses declared in proper descendants that inherit ``cls``'s version of ``name``.

    Every class between ``cls`` and such a descendant inherits the same version,
    so each clause is listed once, with the class declaring it.
    """
    env = ExprEnv(current=obj)
    out = []
    for descendant in ctx.typed.descendants(cls):
        found = ctx.typed.lookup_routine(descendant, name)
        if descendant == cls or found is None or found[1] != cls:
            continue
        for clause in ctx.typed.classes[descendant].invariant:
            out.append((descendant, clause, translate_expr(clause.expr, ctx, env)))
    return out
