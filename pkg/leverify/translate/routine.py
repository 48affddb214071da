"""Translation of one routine declaration into a procedure and implementation."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend import ast as src
from ..ivl import ast as ivl
from .calls import translate_call, translate_creation
from .context import (
    ExprEnv,
    FrameSpec,
    TranslationContext,
    allocated,
    box,
    default_value,
    formal_params,
    fun_name,
    post_name,
    pre_name,
    proc_name,
    sort_of,
)
from .exceptions import exception_check, translate_body
from .expressions import clause_text, translate_expr, translate_postcondition
from .frame import frame_condition
from .inheritance import (
    cumulative_post_clauses,
    cumulative_pre,
    function_axioms,
    generate_inheritance_axioms,
    has_weakening,
    inheriting_invariants,
    invariant_clauses,
    predicate_declarations,
    version_env,
)


@dataclass
class RoutineTranslation:
    procedure: ivl.Procedure
    implementation: ivl.Implementation | None = None
    functions: list[ivl.FunctionDecl] = field(default_factory=list)
    axioms: list[ivl.Axiom] = field(default_factory=list)


def _heap_wf() -> ivl.Expr:
    return ivl.FunApp(ivl.HEAP_WF, (ivl.Var(ivl.HEAP_VAR),))


def _ref_facts(name: str, type_name: str) -> list[ivl.Expr]:
    var = ivl.Var(name)
    heap = ivl.Var(ivl.HEAP_VAR)
    facts = [ivl.or_(ivl.eq(var, ivl.Var(ivl.VOID)), allocated(heap, var))]
    if type_name not in src.BUILTIN_TYPES:
        facts.append(ivl.subtype(ivl.type_of(var), ivl.Var(type_name)))
    return facts


def _writes_heap(stmts: list[ivl.Stmt]) -> bool:
    return any(
        isinstance(s, ivl.Call) or (isinstance(s, (ivl.Assign, ivl.Havoc)) and ivl.HEAP_VAR in _targets(s))
        for s in ivl.walk_stmts(stmts)
    )


def _raises(stmts: list[ivl.Stmt]) -> bool:
    return any(
        isinstance(s, ivl.Call) or (isinstance(s, ivl.Assign) and s.target == ivl.EXCV_VAR)
        for s in ivl.walk_stmts(stmts)
    )


def _conforms(obj: ivl.Expr, cls: str) -> ivl.Expr:
    return ivl.subtype(ivl.type_of(obj), ivl.Var(cls))


def _targets(stmt: ivl.Assign | ivl.Havoc) -> tuple[str, ...]:
    return (stmt.target,) if isinstance(stmt, ivl.Assign) else stmt.names


class BodyTranslator:
    """Statement translation with exception checks jumping to a given label."""

    def __init__(self, ctx: TranslationContext, cls: str, routine: src.RoutineDecl, frame: FrameSpec) -> None:
        self.ctx = ctx
        self.cls = cls
        self.routine = routine
        names = {decl.name: ivl.Var(decl.name) for decl in [*routine.formals, *routine.locals]}
        result = ivl.Var(ivl.RESULT) if routine.result_type else None
        self.env = ExprEnv(names=names, result=result)
        self.frame = frame_condition(frame, self.env)
        self.temps: list[tuple[str, str]] = []

    def expr(self, expr: src.Expr) -> ivl.Expr:
        return translate_expr(expr, self.ctx, self.env)

    def temp(self, sort: str) -> str:
        name = self.ctx.fresh_temp()
        self.temps.append((name, sort))
        return name

    def __call__(self, stmts: list[src.Stmt], label: str) -> list[ivl.Stmt]:
        out: list[ivl.Stmt] = []
        for stmt in stmts:
            out.extend(self.stmt(stmt, label))
        return out

    def stmt(self, stmt: src.Stmt, label: str) -> list[ivl.Stmt]:
        if isinstance(stmt, src.Assign):
            return self.assign(stmt, label)
        if isinstance(stmt, src.RetryAssign):
            return [ivl.Assign(ivl.RETRY_VAR, self.expr(stmt.value))]
        if isinstance(stmt, src.Create):
            return self.create(stmt, label)
        if isinstance(stmt, src.CallStmt):
            return self.call(stmt.call, label, (), stmt.span)
        if isinstance(stmt, src.If):
            return [self.conditional(stmt.branches, stmt.orelse, label)]
        if isinstance(stmt, src.Loop):
            return self.loop(stmt, label)
        if isinstance(stmt, src.Check):
            return [
                ivl.Assert(self.expr(c.expr), ivl.Obligation(ivl.ASSERT, f"check {clause_text(c)}", c.span))
                for c in stmt.clauses
            ]
        if isinstance(stmt, src.Raise):
            return exception_check(ivl.Assign(ivl.EXCV_VAR, ivl.TRUE), label)
        raise TypeError(f"not a statement: {stmt!r}")

    def store(self, attribute: str, value: ivl.Expr) -> ivl.Stmt:
        field_const, sort = self.ctx.field_for(self.cls, attribute)
        heap = ivl.Var(ivl.HEAP_VAR)
        return ivl.Assign(ivl.HEAP_VAR, ivl.MapStore(heap, self.env.current, ivl.Var(field_const), box(value, sort)))

    def target_var(self, stmt: src.Assign | src.Create, sort: str) -> str:
        if stmt.target_kind == "attribute":
            return self.temp(sort)
        return ivl.RESULT if stmt.target_kind == "result" else stmt.target

    def assign(self, stmt: src.Assign, label: str) -> list[ivl.Stmt]:
        value = stmt.value
        if isinstance(value, src.Access) and value.kind == "call":
            var = self.target_var(stmt, sort_of(value.ty))
            out = self.call(value, label, (var,), stmt.span)
            if stmt.target_kind == "attribute":
                out.append(self.store(stmt.target, ivl.Var(var)))
            return out
        translated = self.expr(value)
        if stmt.target_kind == "attribute":
            return [self.store(stmt.target, translated)]
        return [ivl.Assign(self.target_var(stmt, ""), translated)]

    def call(self, access: src.Access, label: str, lhs: tuple[str, ...], span) -> list[ivl.Stmt]:
        target = self.env.current if access.target is None else self.expr(access.target)
        args = tuple(self.expr(arg) for arg in access.args or ())
        return translate_call(
            self.ctx,
            target,
            access.static_class or self.cls,
            access.owner or self.cls,
            access.name,
            args,
            label,
            lhs=lhs,
            span=span,
        )

    def create(self, stmt: src.Create, label: str) -> list[ivl.Stmt]:
        var = self.target_var(stmt, ivl.REF)
        args = tuple(self.expr(arg) for arg in stmt.args)
        out = translate_creation(
            self.ctx,
            var,
            stmt.class_name or "",
            stmt.routine,
            stmt.routine_owner,
            args,
            label,
            span=stmt.span,
        )
        if stmt.target_kind == "attribute":
            out.append(self.store(stmt.target, ivl.Var(var)))
        return out

    def conditional(self, branches, orelse: list[src.Stmt], label: str) -> ivl.Stmt:
        cond, body = branches[0]
        rest = [self.conditional(branches[1:], orelse, label)] if len(branches) > 1 else self(orelse, label)
        return ivl.If(self.expr(cond), self(body, label), rest)

    def loop(self, stmt: src.Loop, label: str) -> list[ivl.Stmt]:
        init = self(stmt.init, label)
        body = self(stmt.body, label)
        invariants = [
            ivl.LoopInvariant(
                self.expr(c.expr),
                obligation=ivl.Obligation(ivl.LOOP_INV_ENTRY, f"loop invariant {clause_text(c)}", c.span),
            )
            for c in stmt.invariant
        ]
        invariants.extend(self.loop_extras(body, stmt.span))
        if _raises(body):
            invariants.append(ivl.LoopInvariant(ivl.not_(ivl.Var(ivl.EXCV_VAR)), free=True))
        return [*init, ivl.While(ivl.not_(self.expr(stmt.until)), invariants, body)]

    def loop_extras(self, body: list[ivl.Stmt], span) -> list[ivl.LoopInvariant]:
        """Frame and heap facts for loops that change the heap."""
        if not _writes_heap(body):
            return []
        return [
            ivl.LoopInvariant(
                self.frame,
                obligation=ivl.Obligation(ivl.LOOP_INV_ENTRY, "loop stays within the routine frame", span),
            ),
            ivl.LoopInvariant(_heap_wf(), free=True),
        ]


def _routine_params(routine: src.RoutineDecl) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    params = [(ivl.CURRENT, ivl.REF), *formal_params(routine)]
    returns = [(ivl.RESULT, sort_of(routine.result_type))] if routine.result_type else []
    return params, returns


def _requires(ctx: TranslationContext, cls: str, routine: src.RoutineDecl) -> list[ivl.Spec]:
    current = ivl.Var(ivl.CURRENT)
    args = [ivl.Var(f.name) for f in routine.formals]
    heap = ivl.Var(ivl.HEAP_VAR)
    specs = [
        ivl.Spec(ivl.eq(ivl.Var(ivl.EXCV_VAR), ivl.FALSE), free=True),
        ivl.Spec(_heap_wf(), free=True),
        ivl.Spec(ivl.BinOp("!=", current, ivl.Var(ivl.VOID)), free=True),
        ivl.Spec(allocated(heap, current), free=True),
        ivl.Spec(ivl.subtype(ivl.type_of(current), ivl.Var(cls)), free=True),
    ]
    for formal in routine.formals:
        if sort_of(formal.type_name) == ivl.REF:
            specs.extend(ivl.Spec(fact, free=True) for fact in _ref_facts(formal.name, formal.type_name))
    if routine.name not in ctx.typed.classes[cls].creators:
        specs.extend(ivl.Spec(expr, free=True) for _, expr in invariant_clauses(ctx, cls, current))
    for descendant, _, expr in inheriting_invariants(ctx, cls, routine.name, current):
        if routine.name not in ctx.typed.classes[descendant].creators:
            specs.append(ivl.Spec(ivl.implies(_conforms(current, descendant), expr), free=True))
    where = proc_name(cls, routine.name)
    if ctx.dynamic:
        app = ivl.FunApp(pre_name(cls, routine.name), (heap, current, *args))
        specs.append(ivl.Spec(app, obligation=ivl.Obligation(ivl.CALLEE_PRE, f"precondition of {where}", routine.span)))
        specs.append(ivl.Spec(cumulative_pre(ctx, cls, routine.name, current, args), free=True))
    elif has_weakening(ctx, cls, routine.name):
        specs.append(
            ivl.Spec(
                cumulative_pre(ctx, cls, routine.name, current, args),
                obligation=ivl.Obligation(ivl.CALLEE_PRE, f"precondition of {where}", routine.span),
            )
        )
    else:
        original, _ = ctx.typed.original(cls, routine.name)
        env = version_env(original, current, args)
        for clause in original.contract.require:
            specs.append(
                ivl.Spec(
                    translate_expr(clause.expr, ctx, env),
                    obligation=ivl.Obligation(ivl.CALLEE_PRE, f"require {clause_text(clause)}", clause.span),
                )
            )
    return specs


def _ensures(ctx: TranslationContext, cls: str, routine: src.RoutineDecl, frame: ivl.Expr) -> list[ivl.Spec]:
    current = ivl.Var(ivl.CURRENT)
    args = [ivl.Var(f.name) for f in routine.formals]
    result = ivl.Var(ivl.RESULT) if routine.result_type else None
    excv = ivl.Var(ivl.EXCV_VAR)
    heap = ivl.Var(ivl.HEAP_VAR)
    specs = []
    for version, clause in cumulative_post_clauses(ctx, cls, routine.name):
        env = version_env(version, current, args, result=result)
        specs.append(
            ivl.Spec(
                translate_postcondition(clause, ctx, env),
                obligation=ivl.Obligation(ivl.POSTCONDITION, f"ensure {clause_text(clause)}", clause.span),
            )
        )
    for clause, expr in invariant_clauses(ctx, cls, current):
        specs.append(
            ivl.Spec(
                ivl.implies(ivl.not_(excv), expr),
                obligation=ivl.Obligation(ivl.CLASS_INV_EXIT, f"invariant {clause_text(clause)}", clause.span),
            )
        )
    for descendant, clause, expr in inheriting_invariants(ctx, cls, routine.name, current):
        guard = ivl.and_(ivl.not_(excv), _conforms(current, descendant))
        specs.append(
            ivl.Spec(
                ivl.implies(guard, expr),
                obligation=ivl.Obligation(
                    ivl.CLASS_INV_EXIT, f"invariant {clause_text(clause)} of {descendant}", clause.span
                ),
            )
        )
    specs.append(ivl.Spec(frame, obligation=ivl.Obligation(ivl.FRAME, "frame condition", routine.span)))
    if ctx.is_pure(cls, routine.name):
        specs.append(
            ivl.Spec(
                ivl.eq(heap, ivl.Old(heap)),
                obligation=ivl.Obligation(ivl.FRAME, "pure routine leaves the heap unchanged", routine.span),
            )
        )
    specs.append(ivl.Spec(_heap_wf(), free=True))
    if routine.result_type and sort_of(routine.result_type) == ivl.REF:
        specs.extend(ivl.Spec(fact, free=True) for fact in _ref_facts(ivl.RESULT, routine.result_type))
    if ctx.dynamic:
        post_args = [heap, ivl.Old(heap), current, *args]
        if result is not None:
            post_args.append(result)
        app = ivl.FunApp(post_name(cls, routine.name), tuple(post_args))
        specs.append(ivl.Spec(ivl.implies(ivl.not_(excv), app), free=True))
    if ctx.has_function(cls, routine):
        assert result is not None
        fun = ivl.FunApp(fun_name(cls, routine.name), (heap, current, *args))
        specs.append(ivl.Spec(ivl.implies(ivl.not_(excv), ivl.eq(result, fun)), free=True))
    return specs


def translate_routine(ctx: TranslationContext, cls: str, routine: src.RoutineDecl) -> RoutineTranslation:
    """Procedure, implementation, predicates and axioms for the declaration of ``routine`` in ``cls``."""
    frame_spec = ctx.frames[(cls, routine.name)]
    params, returns = _routine_params(routine)
    translator = BodyTranslator(ctx, cls, routine, frame_spec)
    procedure = ivl.Procedure(
        proc_name(cls, routine.name),
        params,
        returns,
        requires=_requires(ctx, cls, routine),
        ensures=_ensures(ctx, cls, routine, translator.frame),
        modifies=[ivl.HEAP_VAR, ivl.EXCV_VAR],
        span=routine.span,
    )
    result = RoutineTranslation(
        procedure,
        functions=predicate_declarations(ctx, cls, routine),
        axioms=generate_inheritance_axioms(ctx, cls, routine),
    )
    if ctx.has_function(cls, routine):
        result.axioms.extend(function_axioms(ctx, cls, routine))
    if routine.body is None:
        return result

    ctx.reset_temps()
    locals_ = [(decl.name, sort_of(decl.type_name)) for decl in routine.locals]
    init: list[ivl.Stmt] = [ivl.Assign(name, default_value(sort)) for name, sort in locals_]
    if routine.result_type:
        init.append(ivl.Assign(ivl.RESULT, default_value(sort_of(routine.result_type))))
    rescue_invariant = []
    if routine.rescue is not None:
        locals_.append((ivl.RETRY_VAR, ivl.BOOL))
        init.append(ivl.Assign(ivl.RETRY_VAR, ivl.FALSE))
        rescue_invariant = [
            ivl.LoopInvariant(
                translator.expr(c.expr),
                obligation=ivl.Obligation(ivl.LOOP_INV_ENTRY, f"rescue invariant {clause_text(c)}", c.span),
            )
            for c in routine.contract.rescue_invariant
        ]
    body = translate_body(
        routine.body,
        routine.rescue,
        rescue_invariant,
        translator,
        routine=proc_name(cls, routine.name),
        span=routine.span,
        loop_extras=lambda retry_body: translator.loop_extras(retry_body, routine.span),
    )
    result.implementation = ivl.Implementation(
        proc_name(cls, routine.name),
        params,
        returns,
        locals=locals_ + translator.temps,
        body=init + body,
    )
    return result

