"""Passive form of an implementation.

``desugar`` removes calls and loops: a call asserts the callee's checked
requires, havocs what the callee may modify and assumes its ensures; a loop is
cut at its head (check the invariant, havoc the targets, assume the invariant,
run one iteration, check the invariant again). ``passify`` then gives every
assignment a fresh incarnation so that only assumptions, assertions, choices
and labeled blocks remain. Join points add ``assume v@k == v@j`` on each
incoming path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import WellFormednessError
from ..ivl import ast as ivl
from ..ivl.structure import to_structured

EXIT_LABEL = "$exit"


@dataclass(slots=True)
class PAssume:
    expr: ivl.Expr


@dataclass(slots=True)
class PAssert:
    expr: ivl.Expr
    obligation: ivl.Obligation
    index: int


@dataclass(slots=True)
class PChoice:
    branches: list[list[PStmt]]


@dataclass(slots=True)
class PBlock:
    label: str
    body: list[PStmt]


@dataclass(slots=True)
class PBreak:
    label: str
    joins: list[PAssume] = field(default_factory=list)


PStmt = PAssume | PAssert | PChoice | PBlock | PBreak


@dataclass
class PassiveBody:
    procedure: str
    body: list[PStmt]
    asserts: list[PAssert]
    variables: dict[str, str]


def map_children(expr: ivl.Expr, fn) -> ivl.Expr:
    if isinstance(expr, (ivl.BoolLit, ivl.IntLit, ivl.Var)):
        return expr
    if isinstance(expr, ivl.Old):
        return ivl.Old(fn(expr.operand))
    if isinstance(expr, ivl.UnOp):
        return ivl.UnOp(expr.op, fn(expr.operand))
    if isinstance(expr, ivl.FunApp):
        return ivl.FunApp(expr.name, tuple(fn(arg) for arg in expr.args))
    if isinstance(expr, ivl.MapSelect):
        return ivl.MapSelect(fn(expr.heap), fn(expr.obj), fn(expr.field))
    if isinstance(expr, ivl.MapStore):
        return ivl.MapStore(fn(expr.heap), fn(expr.obj), fn(expr.field), fn(expr.value))
    if isinstance(expr, ivl.BinOp):
        return ivl.BinOp(expr.op, fn(expr.left), fn(expr.right))
    if isinstance(expr, ivl.Quant):
        return ivl.Quant(expr.kind, expr.bound, fn(expr.body))
    raise TypeError(f"not an IVL expression: {expr!r}")


def eliminate_old(expr: ivl.Expr, old_map: dict[str, ivl.Expr]) -> ivl.Expr:
    """Replace ``old(e)`` by ``e`` with the names in ``old_map`` substituted."""
    if isinstance(expr, ivl.Old):
        return ivl.substitute(eliminate_old(expr.operand, old_map), old_map)
    return map_children(expr, lambda sub: eliminate_old(sub, old_map))


def assigned_names(stmts: list[ivl.Stmt], procedures: dict[str, ivl.Procedure]) -> tuple[str, ...]:
    """Variables a statement list may change, in order of first appearance."""
    names: dict[str, None] = {}
    for stmt in ivl.walk_stmts(stmts):
        if isinstance(stmt, ivl.Assign):
            names[stmt.target] = None
        elif isinstance(stmt, ivl.Havoc):
            names.update(dict.fromkeys(stmt.names))
        elif isinstance(stmt, ivl.Call):
            names.update(dict.fromkeys(procedures[stmt.procedure].modifies))
            names.update(dict.fromkeys(stmt.lhs))
    return tuple(names)


def _retag(obligation: ivl.Obligation | None, kind: str, default_span=None) -> ivl.Obligation:
    if obligation is None:
        return ivl.Obligation(kind, "", default_span)
    return ivl.Obligation(kind, obligation.description, obligation.span or default_span)


class _Desugarer:
    def __init__(self, program: ivl.IvlProgram, impl: ivl.Implementation) -> None:
        self.procedures = {proc.name: proc for proc in program.procedures}
        self.variables: dict[str, str] = {}
        for name, sort in [
            *((g.name, g.sort) for g in program.globals),
            *impl.params,
            *impl.returns,
            *impl.locals,
        ]:
            self.variables[name] = sort
        self.loops: dict[str, list[ivl.LoopInvariant]] = {}
        self._calls = 0

    def temp(self, name: str, sort: str) -> str:
        self.variables[name] = sort
        return name

    def body(self, stmts: list[ivl.Stmt]) -> list[ivl.Stmt]:
        out: list[ivl.Stmt] = []
        for stmt in stmts:
            out.extend(self.stmt(stmt))
        return out

    def stmt(self, stmt: ivl.Stmt) -> list[ivl.Stmt]:
        if isinstance(stmt, ivl.Call):
            return self.call(stmt)
        if isinstance(stmt, ivl.While):
            return self.loop(stmt)
        if isinstance(stmt, ivl.If):
            return [ivl.If(stmt.cond, self.body(stmt.then), self.body(stmt.orelse))]
        if isinstance(stmt, ivl.Block):
            return [ivl.Block(stmt.label, self.body(stmt.body))]
        if isinstance(stmt, ivl.Continue):
            return self.back_edge(self.loops[stmt.label])
        if isinstance(stmt, ivl.Return):
            return [ivl.Break(EXIT_LABEL)]
        if isinstance(stmt, ivl.Goto):
            raise WellFormednessError(f"unresolved goto {stmt.label}", node=stmt.label)
        return [stmt]

    def call(self, call: ivl.Call) -> list[ivl.Stmt]:
        proc = self.procedures[call.procedure]
        self._calls += 1
        tag = f"call{self._calls}"
        written = {*proc.modifies, *call.lhs}
        out: list[ivl.Stmt] = []
        mapping: dict[str, ivl.Expr] = {}
        for (name, sort), arg in zip(proc.params, call.args):
            if isinstance(arg, (ivl.BoolLit, ivl.IntLit)) or (isinstance(arg, ivl.Var) and arg.name not in written):
                mapping[name] = arg
            else:
                temp = self.temp(f"{tag}.{name}", sort)
                out.append(ivl.Assign(temp, arg))
                mapping[name] = ivl.Var(temp)
        lhs = list(call.lhs)
        for position, (name, sort) in enumerate(proc.returns):
            if position >= len(lhs):
                lhs.append(self.temp(f"{tag}.{name}", sort))
            mapping[name] = ivl.Var(lhs[position])
        for spec in proc.requires:
            if spec.free:
                continue
            description = spec.obligation.description if spec.obligation else "precondition"
            out.append(
                ivl.Assert(
                    ivl.substitute(spec.expr, mapping),
                    ivl.Obligation(
                        ivl.CALLEE_PRE,
                        f"call {call.procedure}: {description}",
                        call.span or (spec.obligation.span if spec.obligation else None),
                    ),
                )
            )
        old_map: dict[str, ivl.Expr] = {}
        for name in proc.modifies:
            snapshot = self.temp(f"{tag}.old.{name}", self.variables[name])
            out.append(ivl.Assign(snapshot, ivl.Var(name)))
            old_map[name] = ivl.Var(snapshot)
        out.append(ivl.Havoc(tuple(dict.fromkeys([*proc.modifies, *lhs]))))
        for spec in proc.ensures:
            out.append(ivl.Assume(eliminate_old(ivl.substitute(spec.expr, mapping), old_map)))
        return out

    def back_edge(self, invariants: list[ivl.LoopInvariant]) -> list[ivl.Stmt]:
        checks: list[ivl.Stmt] = [
            ivl.Assert(inv.expr, _retag(inv.obligation, ivl.LOOP_INV_INDUCTIVE)) for inv in invariants if not inv.free
        ]
        return [*checks, ivl.Assume(ivl.FALSE)]

    def loop(self, loop: ivl.While) -> list[ivl.Stmt]:
        out: list[ivl.Stmt] = [
            ivl.Assert(inv.expr, _retag(inv.obligation, ivl.LOOP_INV_ENTRY)) for inv in loop.invariants if not inv.free
        ]
        targets = assigned_names(loop.body, self.procedures)
        if targets:
            out.append(ivl.Havoc(targets))
        out.extend(ivl.Assume(inv.expr) for inv in loop.invariants)
        if loop.label:
            self.loops[loop.label] = loop.invariants
        body = self.body(loop.body)
        out.append(ivl.If(loop.cond, [*body, *self.back_edge(loop.invariants)], []))
        return out


def desugar(program: ivl.IvlProgram, impl: ivl.Implementation) -> tuple[list[ivl.Stmt], dict[str, str]]:
    """Loop- and call-free body of ``impl`` wrapped in its procedure contract."""
    proc = program.procedure(impl.name)
    if proc is None:
        raise WellFormednessError(f"implementation {impl.name} has no procedure", node=impl.name)
    desugarer = _Desugarer(program, impl)
    rename = {
        declared: ivl.Var(actual)
        for (declared, _), (actual, _) in zip([*proc.params, *proc.returns], [*impl.params, *impl.returns])
        if declared != actual
    }
    stmts: list[ivl.Stmt] = [ivl.Assume(ivl.substitute(spec.expr, rename)) for spec in proc.requires]
    stmts.append(ivl.Block(EXIT_LABEL, desugarer.body(to_structured(impl.body))))
    for spec in proc.ensures:
        if spec.free:
            continue
        obligation = spec.obligation or ivl.Obligation(ivl.POSTCONDITION, "postcondition", proc.span)
        stmts.append(ivl.Assert(ivl.substitute(spec.expr, rename), obligation))
    return stmts, desugarer.variables


class _Passifier:
    def __init__(self, variables: dict[str, str], globals_: list[str]) -> None:
        self.base_sorts = variables
        self.variables: dict[str, str] = {}
        self.versions: dict[str, int] = {}
        self.asserts: list[PAssert] = []
        self.breaks: dict[str, list[tuple[dict[str, str], list[PStmt]]]] = {}
        self.old_map = {name: ivl.Var(self.incarnation(name, 0)) for name in globals_ if name in variables}

    def incarnation(self, name: str, version: int) -> str:
        versioned = f"{name}@{version}"
        self.variables[versioned] = self.base_sorts[name]
        return versioned

    def fresh(self, name: str) -> str:
        self.versions[name] = self.versions.get(name, 0) + 1
        return self.incarnation(name, self.versions[name])

    def initial(self) -> dict[str, str]:
        return {name: self.incarnation(name, 0) for name in self.base_sorts}

    def rename(self, expr: ivl.Expr, inc: dict[str, str]) -> ivl.Expr:
        without_old = eliminate_old(expr, self.old_map)
        return ivl.substitute(without_old, {name: ivl.Var(version) for name, version in inc.items()})

    def seq(self, stmts: list[ivl.Stmt], inc: dict[str, str] | None, out: list[PStmt]) -> dict[str, str] | None:
        for stmt in stmts:
            if inc is None:
                break
            inc = self.stmt(stmt, inc, out)
        return inc

    def stmt(self, stmt: ivl.Stmt, inc: dict[str, str], out: list[PStmt]) -> dict[str, str] | None:
        if isinstance(stmt, ivl.Assign):
            value = self.rename(stmt.value, inc)
            version = self.fresh(stmt.target)
            out.append(PAssume(ivl.eq(ivl.Var(version), value)))
            return {**inc, stmt.target: version}
        if isinstance(stmt, ivl.Havoc):
            return {**inc, **{name: self.fresh(name) for name in stmt.names}}
        if isinstance(stmt, ivl.Assume):
            out.append(PAssume(self.rename(stmt.expr, inc)))
            return inc
        if isinstance(stmt, ivl.Assert):
            check = PAssert(self.rename(stmt.expr, inc), stmt.obligation, len(self.asserts))
            self.asserts.append(check)
            out.append(check)
            return inc
        if isinstance(stmt, ivl.If):
            cond = self.rename(stmt.cond, inc)
            then: list[PStmt] = [PAssume(cond)]
            orelse: list[PStmt] = [PAssume(ivl.not_(cond))]
            then_inc = self.seq(stmt.then, inc, then)
            else_inc = self.seq(stmt.orelse, inc, orelse)
            out.append(PChoice([then, orelse]))
            return self.join([(then_inc, then), (else_inc, orelse)])
        if isinstance(stmt, ivl.Block):
            outer = self.breaks.get(stmt.label)
            self.breaks[stmt.label] = []
            body: list[PStmt] = []
            fallthrough = self.seq(stmt.body, inc, body)
            out.append(PBlock(stmt.label, body))
            incoming = [(fallthrough, body), *self.breaks.pop(stmt.label)]
            if outer is not None:
                self.breaks[stmt.label] = outer
            return self.join(incoming)
        if isinstance(stmt, ivl.Break):
            jump = PBreak(stmt.label)
            self.breaks[stmt.label].append((inc, jump.joins))
            out.append(jump)
            return None
        raise TypeError(f"statement {type(stmt).__name__} survived desugaring")

    def join(self, incoming: list[tuple[dict[str, str] | None, list[PStmt]]]) -> dict[str, str] | None:
        live = [(inc, sink) for inc, sink in incoming if inc is not None]
        if not live:
            return None
        if len(live) == 1:
            return live[0][0]
        merged: dict[str, str] = {}
        for name in live[0][0]:
            versions = {inc[name] for inc, _ in live}
            if len(versions) == 1:
                merged[name] = versions.pop()
                continue
            version = self.fresh(name)
            merged[name] = version
            for inc, sink in live:
                sink.append(PAssume(ivl.eq(ivl.Var(version), ivl.Var(inc[name]))))
        return merged


def passify(program: ivl.IvlProgram, impl: ivl.Implementation) -> PassiveBody:
    stmts, variables = desugar(program, impl)
    passifier = _Passifier(variables, [g.name for g in program.globals])
    body: list[PStmt] = []
    passifier.seq(stmts, passifier.initial(), body)
    return PassiveBody(impl.name, body, passifier.asserts, passifier.variables)
