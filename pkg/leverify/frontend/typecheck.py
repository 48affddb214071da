"""Type checking and name resolution for Lite-Eiffel programs.

``typecheck`` annotates the AST in place (expression types, access kinds and
owners) and returns a ``TypedProgram`` wrapping the class table. Diagnostics
are collected and raised together as ``TypeCheckFailed``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TypeCheckError, TypeCheckFailed
from .ast import (
    BOOLEAN,
    BUILTIN_TYPES,
    INTEGER,
    NONE,
    PRIMITIVES,
    Access,
    Assign,
    Binary,
    BoolLit,
    CallStmt,
    Check,
    ClassDecl,
    Clause,
    Create,
    CurrentRef,
    Decl,
    ExcVRef,
    Expr,
    If,
    IntLit,
    Loop,
    Old,
    Raise,
    ResultRef,
    RetryAssign,
    RoutineDecl,
    SourceProgram,
    Span,
    Stmt,
    Unary,
    VoidLit,
)

_ARITH = frozenset({"+", "-", "*"})
_ORDER = frozenset({"<", "<=", ">", ">="})
_EQUALITY = frozenset({"=", "/="})
_LOGIC = frozenset({"and", "or", "implies"})


@dataclass
class TypedProgram:
    """A type-checked program together with its class hierarchy queries."""

    source: SourceProgram
    classes: dict[str, ClassDecl] = field(default_factory=dict)

    @property
    def root(self) -> tuple[str, str] | None:
        return self.source.root

    def class_names(self) -> list[str]:
        return [cls.name for cls in self.source.classes]

    def ancestors(self, name: str) -> list[str]:
        """``name`` followed by its ancestors, nearest first."""
        chain: list[str] = []
        current: str | None = name
        while current is not None and current in self.classes and current not in chain:
            chain.append(current)
            current = self.classes[current].parent
        return chain

    def descendants(self, name: str) -> list[str]:
        """``name`` and every class inheriting from it, in declaration order."""
        return [cls for cls in self.class_names() if name in self.ancestors(cls)]

    def depth(self, name: str) -> int:
        return len(self.ancestors(name)) - 1

    def conforms(self, sub: str, sup: str) -> bool:
        if sub == sup:
            return True
        if sub == NONE:
            return sup not in PRIMITIVES
        if sub in BUILTIN_TYPES or sup in BUILTIN_TYPES:
            return False
        return sup in self.ancestors(sub)

    def is_reference(self, type_name: str) -> bool:
        return type_name not in PRIMITIVES

    def lookup_attribute(self, cls: str, name: str) -> tuple[Decl, str] | None:
        for owner in self.ancestors(cls):
            attr = self.classes[owner].attribute(name)
            if attr is not None:
                return attr, owner
        return None

    def attributes(self, cls: str) -> list[tuple[Decl, str]]:
        """All attributes visible in ``cls``, inherited ones first."""
        result: list[tuple[Decl, str]] = []
        for owner in reversed(self.ancestors(cls)):
            result.extend((attr, owner) for attr in self.classes[owner].attributes)
        return result

    def lookup_routine(self, cls: str, name: str) -> tuple[RoutineDecl, str] | None:
        """The version of routine ``name`` in effect in ``cls`` and the class declaring it."""
        for owner in self.ancestors(cls):
            routine = self.classes[owner].routine(name)
            if routine is not None:
                return routine, owner
        return None

    def original(self, cls: str, name: str) -> tuple[RoutineDecl, str] | None:
        """The topmost declaration of routine ``name`` among the ancestors of ``cls``."""
        found = None
        for owner in self.ancestors(cls):
            routine = self.classes[owner].routine(name)
            if routine is not None:
                found = (routine, owner)
        return found

    def versions(self, cls: str, name: str) -> list[tuple[RoutineDecl, str]]:
        """Declarations of ``name`` from the original down to the one in effect in ``cls``."""
        found = []
        for owner in reversed(self.ancestors(cls)):
            routine = self.classes[owner].routine(name)
            if routine is not None:
                found.append((routine, owner))
        return found

    def is_redefinition(self, cls: str, name: str) -> bool:
        parent = self.classes[cls].parent
        return parent is not None and self.lookup_routine(parent, name) is not None

    def routine_names(self, cls: str) -> list[str]:
        names: list[str] = []
        for owner in reversed(self.ancestors(cls)):
            for routine in self.classes[owner].routines:
                if routine.name not in names:
                    names.append(routine.name)
        return names

    def routine_sites(self) -> list[tuple[str, RoutineDecl]]:
        """Every (declaring class, routine) pair in declaration order."""
        return [(cls.name, routine) for cls in self.source.classes for routine in cls.routines]


@dataclass
class _Scope:
    cls: str
    routine: RoutineDecl | None = None
    locals: dict[str, str] = field(default_factory=dict)
    formals: dict[str, str] = field(default_factory=dict)
    allow_old: bool = False
    allow_excv: bool = False
    allow_result: bool = False
    in_old: bool = False


class _Checker:
    def __init__(self, program: SourceProgram) -> None:
        self.program = program
        self.typed = TypedProgram(program)
        self.errors: list[TypeCheckError] = []

    def error(self, message: str, span: Span | None) -> None:
        self.errors.append(TypeCheckError(message, span=span))

    # hierarchy

    def check_classes(self) -> None:
        for cls in self.program.classes:
            if cls.name in self.typed.classes:
                self.error(f"class {cls.name} declared twice", cls.span)
                continue
            if cls.name in BUILTIN_TYPES or cls.name == NONE:
                self.error(f"class name {cls.name} is reserved", cls.span)
                continue
            self.typed.classes[cls.name] = cls
        for cls in self.program.classes:
            if cls.parent is None:
                continue
            if cls.parent not in self.typed.classes:
                self.error(f"class {cls.name} inherits from unknown class {cls.parent}", cls.span)
                cls.parent = None
                continue
            seen = {cls.name}
            current = cls.parent
            while current is not None:
                if current in seen:
                    self.error(f"inheritance cycle through class {cls.name}", cls.span)
                    cls.parent = None
                    break
                seen.add(current)
                current = self.typed.classes[current].parent

    def check_type(self, type_name: str | None, span: Span | None) -> None:
        if type_name is None:
            return
        if type_name not in BUILTIN_TYPES and type_name not in self.typed.classes:
            self.error(f"unknown type {type_name}", span)

    def check_members(self, cls: ClassDecl) -> None:
        typed = self.typed
        parent = cls.parent
        seen: set[str] = set()
        for attr in cls.attributes:
            self.check_type(attr.type_name, attr.span)
            if attr.name in seen:
                self.error(f"feature {attr.name} declared twice in {cls.name}", attr.span)
            seen.add(attr.name)
            if parent and (typed.lookup_attribute(parent, attr.name) or typed.lookup_routine(parent, attr.name)):
                self.error(f"attribute {attr.name} in {cls.name} clashes with an inherited feature", attr.span)
        for routine in cls.routines:
            if routine.name in seen:
                self.error(f"feature {routine.name} declared twice in {cls.name}", routine.span)
            seen.add(routine.name)
            if parent and typed.lookup_attribute(parent, routine.name):
                self.error(f"routine {routine.name} in {cls.name} clashes with an inherited attribute", routine.span)
            for decl in [*routine.formals, *routine.locals]:
                self.check_type(decl.type_name, decl.span)
            self.check_type(routine.result_type, routine.span)
            names = [d.name for d in [*routine.formals, *routine.locals]]
            for name in names:
                if names.count(name) > 1:
                    self.error(f"duplicate local or formal {name} in {cls.name}.{routine.name}", routine.span)
                    break
            self.check_redefinition(cls, routine)
            for entry in routine.modify or []:
                self.check_modify_entry(cls, routine, entry)
            if routine.contract.rescue_invariant and routine.rescue is None:
                self.error(f"{cls.name}.{routine.name} has a rescue invariant but no rescue clause", routine.span)
        for name in cls.redefines:
            if parent is None or typed.lookup_routine(parent, name) is None:
                self.error(f"{cls.name} redefines {name}, which no ancestor declares", cls.span)
            elif cls.routine(name) is None:
                self.error(f"{cls.name} lists {name} under redefine but does not declare it", cls.span)
        for name in cls.creators:
            found = cls.routine(name)
            if found is None:
                self.error(f"creation procedure {name} must be declared in {cls.name}", cls.span)
            elif found.result_type is not None:
                self.error(f"creation procedure {name} of {cls.name} must not return a result", cls.span)
        if not cls.deferred:
            for name in typed.routine_names(cls.name):
                found = typed.lookup_routine(cls.name, name)
                if found is not None and found[0].deferred:
                    self.error(f"effective class {cls.name} has deferred routine {name}", cls.span)

    def check_modify_entry(self, cls: ClassDecl, routine: RoutineDecl, entry: str) -> None:
        receiver, _, name = entry.rpartition(".")
        owner = cls.name
        if receiver:
            formal = next((f for f in routine.formals if f.name == receiver), None)
            if formal is None or formal.type_name in BUILTIN_TYPES or formal.type_name not in self.typed.classes:
                self.error(f"modify clause entry {entry} does not start with a formal of class type", routine.span)
                return
            owner = formal.type_name
        if self.typed.lookup_attribute(owner, name) is None:
            self.error(f"modify clause names unknown attribute {entry}", routine.span)

    def check_redefinition(self, cls: ClassDecl, routine: RoutineDecl) -> None:
        typed = self.typed
        where = f"{cls.name}.{routine.name}"
        inherited = typed.lookup_routine(cls.parent, routine.name) if cls.parent else None
        contract = routine.contract
        if inherited is None:
            if contract.ensure_then:
                self.error(f"ensure then on {where}, which is not a redefinition", routine.span)
            if contract.require_else:
                self.error(f"require else on {where}, which is not a redefinition", routine.span)
            return
        previous, _ = inherited
        if not previous.deferred and routine.name not in cls.redefines:
            self.error(f"{where} redefines an effective routine without listing it under redefine", routine.span)
        if [d.type_name for d in previous.formals] != [d.type_name for d in routine.formals]:
            self.error(f"{where} changes the formal argument types of the inherited routine", routine.span)
        if previous.result_type != routine.result_type:
            self.error(f"{where} changes the result type of the inherited routine", routine.span)
        if contract.ensure:
            self.error(f"{where} is a redefinition; use ensure then", routine.span)
        if contract.require:
            self.error(f"{where} is a redefinition; use require else", routine.span)

    # contracts and bodies

    def check_class_body(self, cls: ClassDecl) -> None:
        invariant_scope = _Scope(cls.name)
        for clause in cls.invariant:
            self.check_clause(clause, invariant_scope)
        for routine in cls.routines:
            self.check_routine(cls, routine)

    def routine_scope(self, cls: ClassDecl, routine: RoutineDecl, **flags: bool) -> _Scope:
        scope = _Scope(
            cls.name,
            routine,
            locals={d.name: d.type_name for d in routine.locals},
            formals={d.name: d.type_name for d in routine.formals},
            **flags,
        )
        return scope

    def check_routine(self, cls: ClassDecl, routine: RoutineDecl) -> None:
        has_result = routine.result_type is not None
        contract = routine.contract
        pre_scope = self.routine_scope(cls, routine)
        pre_scope.locals = {}
        for clause in [*contract.require, *contract.require_else]:
            self.check_clause(clause, pre_scope)
        post_scope = self.routine_scope(cls, routine, allow_old=True, allow_excv=True, allow_result=has_result)
        post_scope.locals = {}
        for clause in [*contract.ensure, *contract.ensure_then]:
            self.check_clause(clause, post_scope)
        body_scope = self.routine_scope(cls, routine, allow_result=has_result)
        rescue_inv_scope = self.routine_scope(cls, routine, allow_excv=True, allow_result=has_result)
        for clause in contract.rescue_invariant:
            self.check_clause(clause, rescue_inv_scope)
        if routine.body is not None:
            self.check_stmts(routine.body, body_scope)
        if routine.rescue is not None:
            self.check_stmts(routine.rescue, body_scope)

    def check_clause(self, clause: Clause, scope: _Scope) -> None:
        self.expect_type(clause.expr, BOOLEAN, scope, "contract clause")

    def expect_type(self, expr: Expr, expected: str, scope: _Scope, what: str) -> None:
        actual = self.check_expr(expr, scope)
        if actual is not None and not self.typed.conforms(actual, expected):
            self.error(f"{what} has type {actual}, expected {expected}", expr.span)

    def check_stmts(self, stmts: list[Stmt], scope: _Scope) -> None:
        for stmt in stmts:
            self.check_stmt(stmt, scope)

    def check_stmt(self, stmt: Stmt, scope: _Scope) -> None:
        if isinstance(stmt, Assign):
            target_type = self.resolve_target(stmt, scope)
            value_type = self.check_expr(stmt.value, scope, top_level_call=True)
            if isinstance(stmt.value, Access) and stmt.value.kind == "call" and value_type is None:
                self.error(f"procedure {stmt.value.name} does not return a value", stmt.span)
            if target_type and value_type and not self.typed.conforms(value_type, target_type):
                self.error(f"cannot assign {value_type} to {stmt.target} of type {target_type}", stmt.span)
        elif isinstance(stmt, RetryAssign):
            self.expect_type(stmt.value, BOOLEAN, scope, "Retry value")
        elif isinstance(stmt, Create):
            self.check_create(stmt, scope)
        elif isinstance(stmt, CallStmt):
            self.check_expr(stmt.call, scope, top_level_call=True)
            if stmt.call.kind != "call":
                if stmt.call.kind is not None:
                    self.error(f"{stmt.call.name} is not a routine", stmt.span)
            elif stmt.call.ty is not None:
                self.error(f"function {stmt.call.name} called as an instruction; assign its result", stmt.span)
        elif isinstance(stmt, If):
            for cond, body in stmt.branches:
                self.expect_type(cond, BOOLEAN, scope, "condition")
                self.check_stmts(body, scope)
            self.check_stmts(stmt.orelse, scope)
        elif isinstance(stmt, Loop):
            self.check_stmts(stmt.init, scope)
            for clause in stmt.invariant:
                self.check_clause(clause, scope)
            self.expect_type(stmt.until, BOOLEAN, scope, "exit condition")
            self.check_stmts(stmt.body, scope)
        elif isinstance(stmt, Check):
            for clause in stmt.clauses:
                self.check_clause(clause, scope)
        elif isinstance(stmt, Raise):
            pass

    def resolve_target(self, stmt: Assign | Create, scope: _Scope) -> str | None:
        name = stmt.target
        if name == "Result":
            if not scope.allow_result:
                self.error("Result used outside a function", stmt.span)
                return None
            stmt.target_kind = "result"
            return scope.routine.result_type if scope.routine else None
        if name in scope.locals:
            stmt.target_kind = "local"
            return scope.locals[name]
        if name in scope.formals:
            self.error(f"formal argument {name} cannot be assigned", stmt.span)
            return None
        found = self.typed.lookup_attribute(scope.cls, name)
        if found is not None:
            stmt.target_kind = "attribute"
            stmt.owner = found[1]
            return found[0].type_name
        self.error(f"unknown assignment target {name}", stmt.span)
        return None

    def check_create(self, stmt: Create, scope: _Scope) -> None:
        target_type = self.resolve_target(stmt, scope)
        if stmt.class_name is None:
            stmt.class_name = target_type
        class_name = stmt.class_name
        if class_name is None:
            return
        cls = self.typed.classes.get(class_name)
        if cls is None:
            self.error(f"cannot create an instance of {class_name}", stmt.span)
            return
        if cls.deferred:
            self.error(f"cannot create an instance of deferred class {class_name}", stmt.span)
        if target_type is not None and not self.typed.conforms(class_name, target_type):
            self.error(f"{class_name} does not conform to {target_type}", stmt.span)
        if stmt.routine is None:
            if cls.creators:
                self.error(f"creating {class_name} requires one of its creation procedures", stmt.span)
            if stmt.args:
                self.error("arguments given without a creation procedure", stmt.span)
            return
        if stmt.routine not in cls.creators:
            self.error(f"{stmt.routine} is not a creation procedure of {class_name}", stmt.span)
            return
        found = self.typed.lookup_routine(class_name, stmt.routine)
        if found is None:
            return
        routine, owner = found
        stmt.routine_owner = owner
        self.check_args(stmt.args, routine, scope, stmt.span)

    def check_args(self, args: tuple[Expr, ...], routine: RoutineDecl, scope: _Scope, span: Span | None) -> None:
        if len(args) != len(routine.formals):
            self.error(f"{routine.name} expects {len(routine.formals)} argument(s), got {len(args)}", span)
        for arg, formal in zip(args, routine.formals):
            actual = self.check_expr(arg, scope)
            if actual is not None and not self.typed.conforms(actual, formal.type_name):
                self.error(f"argument {formal.name} of {routine.name} has type {actual}", arg.span)
        for arg in args[len(routine.formals) :]:
            self.check_expr(arg, scope)

    # expressions

    def check_expr(self, expr: Expr, scope: _Scope, top_level_call: bool = False) -> str | None:
        ty = self._check_expr(expr, scope, top_level_call)
        expr.ty = ty
        return ty

    def _check_expr(self, expr: Expr, scope: _Scope, top_level_call: bool) -> str | None:
        if isinstance(expr, IntLit):
            return INTEGER
        if isinstance(expr, BoolLit):
            return BOOLEAN
        if isinstance(expr, VoidLit):
            return NONE
        if isinstance(expr, CurrentRef):
            return scope.cls
        if isinstance(expr, ResultRef):
            if not scope.allow_result:
                self.error("Result used outside a function or its postcondition", expr.span)
                return None
            return scope.routine.result_type if scope.routine else None
        if isinstance(expr, ExcVRef):
            if not scope.allow_excv:
                self.error("ExcV may only appear in postconditions and rescue invariants", expr.span)
            return BOOLEAN
        if isinstance(expr, Old):
            if not scope.allow_old:
                self.error("old may only appear in postconditions", expr.span)
            if scope.in_old:
                self.error("nested old expression", expr.span)
            scope.in_old = True
            try:
                return self.check_expr(expr.operand, scope)
            finally:
                scope.in_old = False
        if isinstance(expr, Unary):
            expected = BOOLEAN if expr.op == "not" else INTEGER
            self.expect_type(expr.operand, expected, scope, f"operand of {expr.op}")
            return expected
        if isinstance(expr, Binary):
            return self.check_binary(expr, scope)
        if isinstance(expr, Access):
            return self.check_access(expr, scope, top_level_call)
        return None

    def check_binary(self, expr: Binary, scope: _Scope) -> str | None:
        if expr.op in _ARITH:
            self.expect_type(expr.left, INTEGER, scope, f"operand of {expr.op}")
            self.expect_type(expr.right, INTEGER, scope, f"operand of {expr.op}")
            return INTEGER
        if expr.op in _ORDER:
            self.expect_type(expr.left, INTEGER, scope, f"operand of {expr.op}")
            self.expect_type(expr.right, INTEGER, scope, f"operand of {expr.op}")
            return BOOLEAN
        if expr.op in _LOGIC:
            self.expect_type(expr.left, BOOLEAN, scope, f"operand of {expr.op}")
            self.expect_type(expr.right, BOOLEAN, scope, f"operand of {expr.op}")
            return BOOLEAN
        if expr.op in _EQUALITY:
            left = self.check_expr(expr.left, scope)
            right = self.check_expr(expr.right, scope)
            if left and right and not (self.typed.conforms(left, right) or self.typed.conforms(right, left)):
                self.error(f"cannot compare {left} with {right}", expr.span)
            return BOOLEAN
        self.error(f"unknown operator {expr.op}", expr.span)
        return None

    def check_access(self, expr: Access, scope: _Scope, top_level_call: bool) -> str | None:
        if expr.target is None:
            if expr.args is None:
                if expr.name in scope.locals:
                    expr.kind = "local"
                    return scope.locals[expr.name]
                if expr.name in scope.formals:
                    expr.kind = "formal"
                    return scope.formals[expr.name]
            static_class = scope.cls
        else:
            target_type = self.check_expr(expr.target, scope)
            if target_type is None:
                return None
            if target_type in BUILTIN_TYPES or target_type == NONE:
                self.error(f"cannot access feature {expr.name} on a value of type {target_type}", expr.span)
                return None
            static_class = target_type
        expr.static_class = static_class
        if expr.args is None:
            attr = self.typed.lookup_attribute(static_class, expr.name)
            if attr is not None:
                expr.kind = "attribute"
                expr.owner = attr[1]
                return attr[0].type_name
        found = self.typed.lookup_routine(static_class, expr.name)
        if found is None:
            self.error(f"unknown feature {expr.name} in class {static_class}", expr.span)
            return None
        routine, owner = found
        expr.kind = "call"
        expr.owner = owner
        self.check_args(expr.args or (), routine, scope, expr.span)
        if routine.result_type is None and not top_level_call:
            self.error(f"procedure {expr.name} used inside an expression", expr.span)
        return routine.result_type

    def run(self) -> TypedProgram:
        self.check_classes()
        classes = [cls for cls in self.program.classes if self.typed.classes.get(cls.name) is cls]
        for cls in classes:
            self.check_members(cls)
        for cls in classes:
            self.check_class_body(cls)
        if self.errors:
            self.errors.sort(key=_error_key)
            raise TypeCheckFailed(self.errors)
        return self.typed


def _error_key(err: TypeCheckError) -> tuple[str, int, int, str]:
    span = err.span
    if span is None:
        return ("", 0, 0, str(err))
    return (span.file, span.line, span.column, str(err))


def typecheck(program: SourceProgram) -> TypedProgram:
    """Resolve names and check types; raises TypeCheckFailed with every diagnostic."""
    return _Checker(program).run()
