"""Static well-formedness checks for IVL programs."""

from __future__ import annotations

from ..errors import WellFormednessError
from .ast import (
    ARITH_OPS,
    BOOL,
    EQ_OPS,
    FIELD,
    HEAP,
    INT,
    LOGIC_OPS,
    ORDER_OPS,
    REF,
    SORTS,
    TYPENAME,
    VALUE,
    Assert,
    Assign,
    Assume,
    BinOp,
    Block,
    BoolLit,
    Break,
    Call,
    Continue,
    Expr,
    FunApp,
    Goto,
    Havoc,
    If,
    Implementation,
    IntLit,
    IvlProgram,
    MapSelect,
    MapStore,
    Old,
    Procedure,
    Quant,
    Return,
    Stmt,
    UnOp,
    Var,
    While,
)


class _SortError(Exception):
    pass


class _Checker:
    def __init__(self, program: IvlProgram) -> None:
        self.program = program
        self.errors: list[WellFormednessError] = []
        self.type_names = {decl.name for decl in program.types}
        self.constants = {decl.name: decl.sort for decl in program.constants}
        self.globals = {decl.name: decl.sort for decl in program.globals}
        self.functions = {decl.name: ([sort for _, sort in decl.params], decl.result) for decl in program.functions}
        self.procedures = {proc.name: proc for proc in program.procedures}

    def error(self, message: str, node: str) -> None:
        self.errors.append(WellFormednessError(message, node=node))

    # expressions

    def sort_of(self, expr: Expr, env: dict[str, str], allow_old: bool) -> str:
        if isinstance(expr, BoolLit):
            return BOOL
        if isinstance(expr, IntLit):
            return INT
        if isinstance(expr, Var):
            if expr.name not in env:
                raise _SortError(f"undeclared identifier {expr.name}")
            return env[expr.name]
        if isinstance(expr, Old):
            if not allow_old:
                raise _SortError("old() is not allowed here")
            return self.sort_of(expr.operand, env, allow_old=False)
        if isinstance(expr, FunApp):
            if expr.name not in self.functions:
                raise _SortError(f"undeclared function {expr.name}")
            params, result = self.functions[expr.name]
            if len(params) != len(expr.args):
                raise _SortError(f"{expr.name} expects {len(params)} argument(s)")
            for arg, sort in zip(expr.args, params):
                self.expect(arg, sort, env, allow_old)
            return result
        if isinstance(expr, MapSelect):
            self.expect(expr.heap, HEAP, env, allow_old)
            self.expect(expr.obj, REF, env, allow_old)
            self.expect(expr.field, FIELD, env, allow_old)
            return VALUE
        if isinstance(expr, MapStore):
            self.expect(expr.heap, HEAP, env, allow_old)
            self.expect(expr.obj, REF, env, allow_old)
            self.expect(expr.field, FIELD, env, allow_old)
            self.expect(expr.value, VALUE, env, allow_old)
            return HEAP
        if isinstance(expr, UnOp):
            sort = BOOL if expr.op == "!" else INT
            self.expect(expr.operand, sort, env, allow_old)
            return sort
        if isinstance(expr, BinOp):
            return self.sort_of_binop(expr, env, allow_old)
        if isinstance(expr, Quant):
            inner = dict(env)
            for name, sort in expr.bound:
                if sort not in SORTS:
                    raise _SortError(f"unknown sort {sort}")
                inner[name] = sort
            self.expect(expr.body, BOOL, inner, allow_old)
            return BOOL
        raise _SortError(f"not an expression: {expr!r}")

    def sort_of_binop(self, expr: BinOp, env: dict[str, str], allow_old: bool) -> str:
        if expr.op in ARITH_OPS:
            self.expect(expr.left, INT, env, allow_old)
            self.expect(expr.right, INT, env, allow_old)
            return INT
        if expr.op in ORDER_OPS:
            self.expect(expr.left, INT, env, allow_old)
            self.expect(expr.right, INT, env, allow_old)
            return BOOL
        if expr.op in LOGIC_OPS:
            self.expect(expr.left, BOOL, env, allow_old)
            self.expect(expr.right, BOOL, env, allow_old)
            return BOOL
        if expr.op in EQ_OPS:
            left = self.sort_of(expr.left, env, allow_old)
            self.expect(expr.right, left, env, allow_old)
            return BOOL
        if expr.op == "<:":
            self.expect(expr.left, TYPENAME, env, allow_old)
            self.expect(expr.right, TYPENAME, env, allow_old)
            return BOOL
        raise _SortError(f"unknown operator {expr.op}")

    def expect(self, expr: Expr, sort: str, env: dict[str, str], allow_old: bool) -> None:
        actual = self.sort_of(expr, env, allow_old)
        if actual != sort:
            raise _SortError(f"expected sort {sort}, found {actual}")

    def check_formula(self, expr: Expr, env: dict[str, str], node: str, *, allow_old: bool) -> None:
        try:
            self.expect(expr, BOOL, env, allow_old)
        except _SortError as exc:
            self.error(str(exc), node)

    # declarations

    def base_env(self) -> dict[str, str]:
        env = dict(self.constants)
        env.update(self.globals)
        return env

    def check_declarations(self) -> None:
        seen: set[str] = set()
        for name in [*self.constants, *self.globals, *self.functions]:
            if name in seen:
                self.error(f"duplicate declaration {name}", name)
            seen.add(name)
        for sort in [*self.constants.values(), *self.globals.values()]:
            if sort not in SORTS:
                self.error(f"unknown sort {sort}", sort)
        for index, axiom in enumerate(self.program.axioms):
            self.check_formula(axiom.expr, self.base_env(), f"axiom #{index}", allow_old=False)

    def check_procedure(self, proc: Procedure) -> None:
        env = self.base_env()
        env.update(proc.params)
        for spec in proc.requires:
            self.check_formula(spec.expr, env, f"{proc.name} requires", allow_old=False)
        post_env = dict(env)
        post_env.update(proc.returns)
        for spec in proc.ensures:
            self.check_formula(spec.expr, post_env, f"{proc.name} ensures", allow_old=True)
        for name in proc.modifies:
            if name not in self.globals:
                self.error(f"modifies names {name}, which is not a global variable", proc.name)

    def check_implementation(self, impl: Implementation) -> None:
        proc = self.procedures.get(impl.name)
        if proc is None:
            self.error(f"implementation {impl.name} has no procedure declaration", impl.name)
            return
        if [s for _, s in proc.params] != [s for _, s in impl.params] or [s for _, s in proc.returns] != [
            s for _, s in impl.returns
        ]:
            self.error(f"implementation {impl.name} does not match its procedure signature", impl.name)
        env = self.base_env()
        env.update(impl.params)
        env.update(impl.returns)
        env.update(impl.locals)
        assignable = {name for name, _ in [*impl.returns, *impl.locals]} | set(proc.modifies)
        labels: list[str] = []
        for stmt in _walk_blocks(impl.body):
            if stmt.label in labels:
                self.error(f"label {stmt.label} declared twice", impl.name)
            labels.append(stmt.label)
        self.check_stmts(impl.body, env, assignable, proc, [], impl.name)

    def check_target(self, name: str, env: dict[str, str], assignable: set[str], node: str) -> None:
        if name not in env:
            self.error(f"undeclared identifier {name}", node)
        elif name not in assignable:
            if name in self.globals:
                self.error(f"global {name} assigned but missing from modifies", node)
            else:
                self.error(f"{name} is not assignable", node)

    def check_stmts(
        self,
        stmts: list[Stmt],
        env: dict[str, str],
        assignable: set[str],
        proc: Procedure,
        enclosing: list[tuple[str, str]],
        node: str,
    ) -> None:
        for stmt in stmts:
            self.check_stmt(stmt, env, assignable, proc, enclosing, node)

    def check_stmt(self, stmt, env, assignable, proc, enclosing, node) -> None:
        where = f"{node}: {type(stmt).__name__}"
        if isinstance(stmt, Assign):
            self.check_target(stmt.target, env, assignable, where)
            if stmt.target in env:
                try:
                    self.expect(stmt.value, env[stmt.target], env, allow_old=False)
                except _SortError as exc:
                    self.error(str(exc), where)
        elif isinstance(stmt, Havoc):
            for name in stmt.names:
                self.check_target(name, env, assignable, where)
        elif isinstance(stmt, (Assume, Assert)):
            self.check_formula(stmt.expr, env, where, allow_old=False)
        elif isinstance(stmt, Call):
            self.check_call(stmt, env, assignable, proc, where)
        elif isinstance(stmt, If):
            self.check_formula(stmt.cond, env, where, allow_old=False)
            self.check_stmts(stmt.then, env, assignable, proc, enclosing, node)
            self.check_stmts(stmt.orelse, env, assignable, proc, enclosing, node)
        elif isinstance(stmt, While):
            self.check_formula(stmt.cond, env, where, allow_old=False)
            for inv in stmt.invariants:
                self.check_formula(inv.expr, env, where, allow_old=True)
            inner = [*enclosing, ("loop", stmt.label)] if stmt.label else enclosing
            self.check_stmts(stmt.body, env, assignable, proc, inner, node)
        elif isinstance(stmt, Block):
            self.check_stmts(stmt.body, env, assignable, proc, [*enclosing, ("block", stmt.label)], node)
        elif isinstance(stmt, Goto):
            if not any(label == stmt.label for _, label in enclosing):
                self.error(f"goto {stmt.label} does not target an enclosing block or loop", where)
        elif isinstance(stmt, Break):
            if ("block", stmt.label) not in enclosing:
                self.error(f"break {stmt.label} does not exit an enclosing block", where)
        elif isinstance(stmt, Continue):
            if ("loop", stmt.label) not in enclosing:
                self.error(f"continue {stmt.label} does not target an enclosing loop", where)
        elif isinstance(stmt, Return):
            pass
        else:
            self.error(f"unknown statement {stmt!r}", where)

    def check_call(self, stmt: Call, env, assignable, proc: Procedure, where: str) -> None:
        callee = self.procedures.get(stmt.procedure)
        if callee is None:
            self.error(f"call to undeclared procedure {stmt.procedure}", where)
            return
        if len(callee.params) != len(stmt.args):
            self.error(f"{stmt.procedure} expects {len(callee.params)} argument(s)", where)
        for arg, (_, sort) in zip(stmt.args, callee.params):
            try:
                self.expect(arg, sort, env, allow_old=False)
            except _SortError as exc:
                self.error(str(exc), where)
        if len(callee.returns) != len(stmt.lhs):
            self.error(f"{stmt.procedure} returns {len(callee.returns)} value(s)", where)
        for name, (_, sort) in zip(stmt.lhs, callee.returns):
            self.check_target(name, env, assignable, where)
            if name in env and env[name] != sort:
                self.error(f"call result {name} has sort {env[name]}, expected {sort}", where)
        for name in callee.modifies:
            if name not in proc.modifies:
                self.error(f"callee {stmt.procedure} modifies {name}, which {proc.name} does not", where)

    def run(self) -> list[WellFormednessError]:
        self.check_declarations()
        for proc in self.program.procedures:
            self.check_procedure(proc)
        for impl in self.program.implementations:
            self.check_implementation(impl)
        return self.errors


def _walk_blocks(stmts: list[Stmt]):
    for stmt in stmts:
        if isinstance(stmt, Block):
            yield stmt
            yield from _walk_blocks(stmt.body)
        elif isinstance(stmt, While):
            yield from _walk_blocks(stmt.body)
        elif isinstance(stmt, If):
            yield from _walk_blocks(stmt.then)
            yield from _walk_blocks(stmt.orelse)


def well_formed(program: IvlProgram) -> list[WellFormednessError]:
    """Return every well-formedness violation; an empty list means the program is ok."""
    return _Checker(program).run()


def ensure_well_formed(program: IvlProgram) -> IvlProgram:
    errors = well_formed(program)
    if errors:
        raise errors[0]
    return program
