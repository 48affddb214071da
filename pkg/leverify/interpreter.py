"""Reference interpreter for Lite-Eiffel.

Runs routines of a type-checked program on a small object store and reports
every contract violation it observes. Execution is a tree of generators: a
statement yields one configuration per possible outcome, so routines run "by
contract" (any post-state their postcondition and frame allow) fan out while
ordinary code stays deterministic. Exploration enumerates initial attribute
and argument values from a bounded domain.

Paths that leave the modelled semantics (a call on Void, a function with no
single normal result, an iteration bound hit) are pruned and counted, never
reported as violations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

from .frontend import ast as src
from .frontend.printer import format_expr
from .frontend.typecheck import TypedProgram
from .translate.context import CURRENT_RECEIVER, field_name
from .translate.frame import infer_frame
from .translate.purity import PurityTable, check_purity

INT_DOMAIN = range(4)
MAX_ITERATIONS = 24
MAX_DEPTH = 24
MAX_STATES = 4096

ASSERTION = "assert"
PRECONDITION = "precondition"
POSTCONDITION = "postcondition"
INVARIANT = "invariant"
LOOP_INVARIANT = "loop-invariant"
RESCUE_INVARIANT = "rescue-invariant"
FRAME = "frame"

CLASS_KEY = "$class"

Heap = dict[int, dict[str, Any]]


@dataclass(frozen=True)
class Violation:
    kind: str
    routine: str
    description: str
    span: str | None = None

    def __str__(self) -> str:
        where = f" at {self.span}" if self.span else ""
        return f"{self.kind} violated in {self.routine}{where}: {self.description}"


@dataclass
class Exploration:
    """Outcome of running one routine from every initial state in the domain."""

    routine: str
    states: int = 0
    runs: int = 0
    pruned: int = 0
    truncated: bool = False
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class _Pruned(Exception):
    pass


@dataclass(frozen=True)
class _Config:
    heap: Heap
    env: dict[str, Any]
    excv: bool = False

    def set_local(self, name: str, value: Any) -> _Config:
        return _Config(self.heap, {**self.env, name: value}, self.excv)

    def set_attribute(self, obj: int, name: str, value: Any) -> _Config:
        heap = dict(self.heap)
        heap[obj] = {**heap[obj], name: value}
        return _Config(heap, self.env, self.excv)

    def raised(self, excv: bool = True) -> _Config:
        return _Config(self.heap, self.env, excv)


@dataclass(frozen=True)
class _Activation:
    owner: str
    routine: src.RoutineDecl
    current: int
    depth: int
    old_heap: Heap
    creator: bool = False

    @property
    def where(self) -> str:
        return f"{self.owner}.{self.routine.name}"


def default_value(type_name: str | None) -> Any:
    if type_name == src.INTEGER:
        return 0
    if type_name == src.BOOLEAN:
        return False
    return None


def fault_stubs(typed: TypedProgram) -> set[tuple[str, str]]:
    """Routines that raise directly and have no rescue: the program's external failures."""
    stubs = set()
    for owner, routine in typed.routine_sites():
        if routine.body is None or routine.rescue is not None:
            continue
        if any(isinstance(stmt, src.Raise) for stmt in src.walk_stmts(routine.body)):
            stubs.add((owner, routine.name))
    return stubs


def _mentions_excv(expr: src.Expr) -> bool:
    return any(isinstance(node, src.ExcVRef) for node in src.walk_expr(expr))


class Interpreter:
    def __init__(
        self,
        typed: TypedProgram,
        *,
        by_contract: Iterable[tuple[str, str]] | None = None,
        int_domain: Iterable[int] = INT_DOMAIN,
        purity: PurityTable | None = None,
    ) -> None:
        self.typed = typed
        self.by_contract = set(fault_stubs(typed) if by_contract is None else by_contract)
        self.int_domain = list(int_domain)
        self.purity = purity if purity is not None else check_purity(typed)
        self.violations: list[Violation] = []
        self.pruned = 0

    # bookkeeping

    def _violation(self, kind: str, act: _Activation, description: str, span: src.Span | None) -> None:
        found = Violation(kind, act.where, description, str(span) if span else None)
        if found not in self.violations:
            self.violations.append(found)

    def _prune(self) -> None:
        self.pruned += 1

    def _holds(self, clauses: list[src.Clause], act: _Activation, cfg: _Config, kind: str) -> bool:
        """Check ``clauses`` in ``cfg``; a false clause is recorded as a ``kind`` violation."""
        for clause in clauses:
            if not self._eval(clause.expr, act, cfg):
                self._violation(kind, act, format_expr(clause.expr), clause.span)
                return False
        return True

    # heap helpers

    def class_of(self, heap: Heap, obj: int) -> str:
        return heap[obj][CLASS_KEY]

    def allocate(self, heap: Heap, class_name: str) -> tuple[Heap, int]:
        obj = max(heap, default=0) + 1
        fields: dict[str, Any] = {CLASS_KEY: class_name}
        for attr, _ in self.typed.attributes(class_name):
            fields[attr.name] = default_value(attr.type_name)
        return {**heap, obj: fields}, obj

    def invariant(self, class_name: str) -> list[src.Clause]:
        clauses: list[src.Clause] = []
        for owner in reversed(self.typed.ancestors(class_name)):
            clauses.extend(self.typed.classes[owner].invariant)
        return clauses

    def _invariant_holds(self, class_name: str, obj: int, heap: Heap) -> bool:
        act = self._bare_activation(class_name, obj, heap)
        cfg = _Config(heap, {"Current": obj})
        try:
            return all(self._eval(clause.expr, act, cfg) for clause in self.invariant(class_name))
        except _Pruned:
            return False

    def _bare_activation(self, class_name: str, obj: int, heap: Heap) -> _Activation:
        return _Activation(class_name, src.RoutineDecl(name="invariant"), obj, 0, heap)

    # expressions

    def _eval(self, expr: src.Expr, act: _Activation, cfg: _Config) -> Any:
        if isinstance(expr, src.IntLit):
            return expr.value
        if isinstance(expr, src.BoolLit):
            return expr.value
        if isinstance(expr, src.VoidLit):
            return None
        if isinstance(expr, src.CurrentRef):
            return cfg.env["Current"]
        if isinstance(expr, src.ResultRef):
            return cfg.env.get("Result")
        if isinstance(expr, src.ExcVRef):
            return cfg.excv
        if isinstance(expr, src.Old):
            return self._eval(expr.operand, act, _Config(act.old_heap, cfg.env, cfg.excv))
        if isinstance(expr, src.Unary):
            value = self._eval(expr.operand, act, cfg)
            return (not value) if expr.op == "not" else -value
        if isinstance(expr, src.Binary):
            return self._binary(expr, act, cfg)
        if isinstance(expr, src.Access):
            return self._access(expr, act, cfg)
        raise TypeError(f"not an expression: {expr!r}")

    def _binary(self, expr: src.Binary, act: _Activation, cfg: _Config) -> Any:
        left = self._eval(expr.left, act, cfg)
        if expr.op == "implies":
            return (not left) or bool(self._eval(expr.right, act, cfg))
        if expr.op == "and":
            return bool(left) and bool(self._eval(expr.right, act, cfg))
        if expr.op == "or":
            return bool(left) or bool(self._eval(expr.right, act, cfg))
        right = self._eval(expr.right, act, cfg)
        if expr.op == "=":
            return left == right
        if expr.op == "/=":
            return left != right
        if expr.op == "<":
            return left < right
        if expr.op == "<=":
            return left <= right
        if expr.op == ">":
            return left > right
        if expr.op == ">=":
            return left >= right
        if expr.op == "+":
            return left + right
        if expr.op == "-":
            return left - right
        if expr.op == "*":
            return left * right
        raise ValueError(f"unknown operator {expr.op}")

    def _target(self, expr: src.Access, act: _Activation, cfg: _Config) -> int:
        obj = cfg.env["Current"] if expr.target is None else self._eval(expr.target, act, cfg)
        if obj is None:
            raise _Pruned(f"{expr.name} applied to Void")
        return obj

    def _access(self, expr: src.Access, act: _Activation, cfg: _Config) -> Any:
        if expr.kind in {"local", "formal"}:
            return cfg.env[expr.name]
        obj = self._target(expr, act, cfg)
        if expr.kind == "attribute":
            return cfg.heap[obj][expr.name]
        args = [self._eval(arg, act, cfg) for arg in expr.args or ()]
        outcomes = list(self.invoke(obj, expr.name, args, cfg.heap, depth=act.depth + 1))
        if len(outcomes) != 1 or outcomes[0][1]:
            raise _Pruned(f"function {expr.name} has no single normal result")
        return outcomes[0][2]

    # routines

    def invoke(
        self,
        obj: int,
        name: str,
        args: list[Any],
        heap: Heap,
        *,
        depth: int = 0,
        creator: bool = False,
    ) -> Iterator[tuple[Heap, bool, Any]]:
        """Every outcome ``(heap, exception pending, result)`` of calling ``name`` on ``obj``."""
        if depth > MAX_DEPTH:
            self._prune()
            return
        found = self.typed.lookup_routine(self.class_of(heap, obj), name)
        if found is None:
            raise KeyError(f"{self.class_of(heap, obj)}.{name}")
        routine, owner = found
        env: dict[str, Any] = {"Current": obj, "Retry": False}
        env.update({formal.name: arg for formal, arg in zip(routine.formals, args)})
        env.update({local.name: default_value(local.type_name) for local in routine.locals})
        env["Result"] = default_value(routine.result_type)
        act = _Activation(owner, routine, obj, depth, heap, creator)
        cfg = _Config(heap, env)
        try:
            if not creator and not self._holds(self.invariant(self.class_of(heap, obj)), act, cfg, INVARIANT):
                return
            if not self._precondition(act, cfg):
                return
        except _Pruned:
            self._prune()
            return
        if routine.deferred or (owner, name) in self.by_contract:
            outcomes = self._by_contract(act, cfg)
        else:
            outcomes = self._run_body(act, cfg)
        for final in outcomes:
            try:
                if not self._exit_checks(act, final):
                    continue
            except _Pruned:
                self._prune()
                continue
            yield final.heap, final.excv, final.env.get("Result")

    def _precondition(self, act: _Activation, cfg: _Config) -> bool:
        """The cumulative precondition of the dynamic version: original ``or`` every ``require else``."""
        versions = self.typed.versions(self.class_of(cfg.heap, act.current), act.routine.name)
        groups = []
        for index, (routine, _) in enumerate(versions):
            clauses = routine.contract.require if index == 0 else routine.contract.require_else
            if index == 0 or clauses:
                groups.append(clauses)
        if any(all(self._eval(c.expr, act, cfg) for c in group) for group in groups):
            return True
        self._violation(PRECONDITION, act, "no precondition of the call holds", act.routine.span)
        return False

    def _postcondition_holds(self, act: _Activation, cfg: _Config, *, record: bool) -> bool:
        for routine, _ in self.typed.versions(act.owner, act.routine.name):
            for clause in [*routine.contract.ensure, *routine.contract.ensure_then]:
                if cfg.excv and not _mentions_excv(clause.expr):
                    continue
                if not self._eval(clause.expr, act, cfg):
                    if record:
                        self._violation(POSTCONDITION, act, format_expr(clause.expr), clause.span)
                    return False
        return True

    def _exit_checks(self, act: _Activation, cfg: _Config) -> bool:
        if not self._postcondition_holds(act, cfg, record=True):
            return False
        dynamic = self.class_of(cfg.heap, act.current)
        if not cfg.excv and not self._holds(self.invariant(dynamic), act, cfg, INVARIANT):
            return False
        return self._frame_holds(act, cfg)

    def _allowed(self, act: _Activation, cfg: _Config) -> set[tuple[int, str]]:
        allowed = set()
        for receiver, field_const in infer_frame(self.typed, act.owner, act.routine.name).sorted_pairs():
            obj = act.current if receiver == CURRENT_RECEIVER else cfg.env.get(receiver)
            if obj is not None:
                allowed.add((obj, field_const))
        return allowed

    def _frame_holds(self, act: _Activation, cfg: _Config) -> bool:
        pure = self.purity.is_pure(act.owner, act.routine.name)
        allowed = set() if pure else self._allowed(act, cfg)
        for obj, before in act.old_heap.items():
            after = cfg.heap[obj]
            for name, value in before.items():
                if name == CLASS_KEY or after[name] == value:
                    continue
                attr = self.typed.lookup_attribute(before[CLASS_KEY], name)
                owner = attr[1] if attr else before[CLASS_KEY]
                if (obj, field_name(owner, name)) not in allowed:
                    what = "pure routine changes" if pure else "changes"
                    self._violation(FRAME, act, f"{what} {owner}.{name} outside the frame", act.routine.span)
                    return False
        return True

    def _choices(self, type_name: str, heap: Heap, around: Any = None) -> list[Any]:
        if type_name == src.INTEGER:
            values = set(self.int_domain)
            if isinstance(around, int):
                values.update(around + delta for delta in (-1, 1, 2))
            return sorted(values)
        if type_name == src.BOOLEAN:
            return [False, True]
        refs: list[Any] = [None]
        refs.extend(obj for obj in heap if self.typed.conforms(self.class_of(heap, obj), type_name))
        return refs

    def _by_contract(self, act: _Activation, cfg: _Config) -> Iterator[_Config]:
        """Every post-state within the frame that satisfies the postcondition."""
        slots: list[tuple[int, str, str]] = []
        for obj, field_const in sorted(self._allowed(act, cfg)):
            _, attr_name = field_const.split(".", 1)
            found = self.typed.lookup_attribute(self.class_of(cfg.heap, obj), attr_name)
            if found is not None:
                slots.append((obj, attr_name, found[0].type_name))
        axes: list[list[Any]] = [
            self._choices(type_name, cfg.heap, cfg.heap[obj][name]) for obj, name, type_name in slots
        ]
        axes.append([False, True])
        result_type = act.routine.result_type
        axes.append(self._choices(result_type, cfg.heap) if result_type else [None])
        for values in itertools.product(*axes):
            candidate = _Config(cfg.heap, {**cfg.env, "Result": values[-1]}, values[-2])
            for (obj, name, _), value in zip(slots, values):
                candidate = candidate.set_attribute(obj, name, value)
            try:
                if not self._postcondition_holds(act, candidate, record=False):
                    continue
                dynamic = self.class_of(candidate.heap, act.current)
                if not candidate.excv and not self._invariant_holds(dynamic, act.current, candidate.heap):
                    continue
            except _Pruned:
                continue
            yield candidate

    def _run_body(self, act: _Activation, cfg: _Config) -> Iterator[_Config]:
        routine = act.routine
        body = routine.body or []
        if routine.rescue is None:
            yield from self._seq(body, act, cfg)
            return
        for after in self._seq(body, act, cfg):
            yield from self._rescue(act, after, 0)

    def _rescue(self, act: _Activation, cfg: _Config, attempt: int) -> Iterator[_Config]:
        """The implicit retry loop: the rescue invariant holds after every run of the body."""
        routine = act.routine
        try:
            if not self._holds(routine.contract.rescue_invariant, act, cfg, RESCUE_INVARIANT):
                return
        except _Pruned:
            self._prune()
            return
        if not cfg.excv:
            yield cfg
            return
        if attempt >= MAX_ITERATIONS:
            self._prune()
            return
        handling = _Config(cfg.heap, {**cfg.env, "Retry": False}, False)
        for handled in self._seq(routine.rescue or [], act, handling):
            if handled.excv:
                yield handled
            elif handled.env.get("Retry"):
                for again in self._seq(routine.body or [], act, handled):
                    yield from self._rescue(act, again, attempt + 1)
            else:
                failed = handled.raised()
                try:
                    if not self._holds(routine.contract.rescue_invariant, act, failed, RESCUE_INVARIANT):
                        continue
                except _Pruned:
                    self._prune()
                    continue
                yield failed

    # statements

    def _seq(self, stmts: list[src.Stmt], act: _Activation, cfg: _Config, start: int = 0) -> Iterator[_Config]:
        if start >= len(stmts):
            yield cfg
            return
        for after in self._stmt(stmts[start], act, cfg):
            if after.excv:
                yield after
            else:
                yield from self._seq(stmts, act, after, start + 1)

    def _store(self, target: str, kind: str | None, act: _Activation, cfg: _Config, value: Any) -> _Config:
        if kind == "attribute":
            return cfg.set_attribute(cfg.env["Current"], target, value)
        return cfg.set_local(target, value)

    def _stmt(self, stmt: src.Stmt, act: _Activation, cfg: _Config) -> Iterator[_Config]:
        try:
            if isinstance(stmt, src.Assign):
                if isinstance(stmt.value, src.Access) and stmt.value.kind == "call":
                    for after, result in self._call(stmt.value, act, cfg):
                        yield after if after.excv else self._store(stmt.target, stmt.target_kind, act, after, result)
                    return
                value = self._eval(stmt.value, act, cfg)
                yield self._store(stmt.target, stmt.target_kind, act, cfg, value)
            elif isinstance(stmt, src.RetryAssign):
                yield cfg.set_local("Retry", bool(self._eval(stmt.value, act, cfg)))
            elif isinstance(stmt, src.CallStmt):
                for after, _ in self._call(stmt.call, act, cfg):
                    yield after
            elif isinstance(stmt, src.Create):
                yield from self._create(stmt, act, cfg)
            elif isinstance(stmt, src.If):
                for cond, body in stmt.branches:
                    if self._eval(cond, act, cfg):
                        yield from self._seq(body, act, cfg)
                        return
                yield from self._seq(stmt.orelse, act, cfg)
            elif isinstance(stmt, src.Loop):
                for ready in self._seq(stmt.init, act, cfg):
                    if ready.excv:
                        yield ready
                    else:
                        yield from self._iterate(stmt, act, ready, 0)
            elif isinstance(stmt, src.Check):
                if self._holds(stmt.clauses, act, cfg, ASSERTION):
                    yield cfg
            elif isinstance(stmt, src.Raise):
                yield cfg.raised()
            else:
                raise TypeError(f"not a statement: {stmt!r}")
        except _Pruned:
            self._prune()

    def _iterate(self, loop: src.Loop, act: _Activation, cfg: _Config, count: int) -> Iterator[_Config]:
        if not self._holds(loop.invariant, act, cfg, LOOP_INVARIANT):
            return
        if self._eval(loop.until, act, cfg):
            yield cfg
            return
        if count >= MAX_ITERATIONS:
            self._prune()
            return
        for after in self._seq(loop.body, act, cfg):
            if after.excv:
                yield after
            else:
                yield from self._iterate(loop, act, after, count + 1)

    def _call(self, call: src.Access, act: _Activation, cfg: _Config) -> Iterator[tuple[_Config, Any]]:
        obj = self._target(call, act, cfg)
        args = [self._eval(arg, act, cfg) for arg in call.args or ()]
        for heap, excv, result in self.invoke(obj, call.name, args, cfg.heap, depth=act.depth + 1):
            yield _Config(heap, cfg.env, excv), result

    def _create(self, stmt: src.Create, act: _Activation, cfg: _Config) -> Iterator[_Config]:
        assert stmt.class_name is not None
        args = [self._eval(arg, act, cfg) for arg in stmt.args]
        heap, obj = self.allocate(cfg.heap, stmt.class_name)
        if stmt.routine is None:
            yield self._store(stmt.target, stmt.target_kind, act, _Config(heap, cfg.env), obj)
            return
        for after, excv, _ in self.invoke(obj, stmt.routine, args, heap, depth=act.depth + 1, creator=True):
            created = _Config(after, cfg.env, excv)
            yield created if excv else self._store(stmt.target, stmt.target_kind, act, created, obj)

    # exploration

    def _fresh_objects(self, type_name: str, heap: Heap) -> list[tuple[Heap, int]]:
        classes = [
            name
            for name in self.typed.descendants(type_name)
            if not self.typed.classes[name].deferred
        ]
        return [self.allocate(heap, name) for name in classes]

    def _scalar_axes(self, heap: Heap, obj: int, overrides: Mapping[str, Iterable[Any]]) -> list[tuple[int, str, list[Any]]]:
        axes = []
        for attr, _ in self.typed.attributes(self.class_of(heap, obj)):
            if attr.name in overrides:
                axes.append((obj, attr.name, list(overrides[attr.name])))
            elif attr.type_name in src.PRIMITIVES:
                axes.append((obj, attr.name, self._choices(attr.type_name, heap)))
        return axes

    def initial_states(
        self,
        class_name: str,
        routine: src.RoutineDecl,
        overrides: Mapping[str, Iterable[Any]] | None = None,
    ) -> Iterator[tuple[Heap, int, list[Any]]]:
        """Bounded initial states ``(heap, Current, arguments)`` for running ``routine`` on ``class_name``.

        Scalar attributes of Current and of argument objects range over the
        domain (``overrides`` replaces it per attribute name). A reference
        argument is Void, Current when it conforms, or a fresh object of each
        effective conforming class.
        """
        overrides = overrides or {}
        creator = routine.name in self.typed.classes[class_name].creators
        heap, current = self.allocate({}, class_name)
        axes = [] if creator else self._scalar_axes(heap, current, overrides)
        arg_options: list[list[tuple[str, Any]]] = []
        for formal in routine.formals:
            if formal.name in overrides:
                arg_options.append([("value", v) for v in overrides[formal.name]])
            elif formal.type_name in src.PRIMITIVES:
                arg_options.append([("value", v) for v in self._choices(formal.type_name, heap)])
            else:
                options: list[tuple[str, Any]] = [("value", None)]
                if self.typed.conforms(class_name, formal.type_name):
                    options.append(("value", current))
                options.extend(("fresh", name) for name in self.typed.descendants(formal.type_name)
                               if not self.typed.classes[name].deferred)
                arg_options.append(options)
        for picks in itertools.product(*arg_options):
            arg_heap = heap
            args: list[Any] = []
            arg_axes = list(axes)
            for kind, value in picks:
                if kind == "fresh":
                    arg_heap, obj = self.allocate(arg_heap, value)
                    arg_axes.extend(self._scalar_axes(arg_heap, obj, {}))
                    args.append(obj)
                else:
                    args.append(value)
            for values in itertools.product(*(choices for _, _, choices in arg_axes)):
                state = {obj: dict(fields) for obj, fields in arg_heap.items()}
                for (obj, name, _), value in zip(arg_axes, values):
                    state[obj][name] = value
                yield state, current, args

    def explore(
        self,
        class_name: str,
        routine_name: str,
        *,
        overrides: Mapping[str, Iterable[Any]] | None = None,
        max_states: int = MAX_STATES,
    ) -> Exploration:
        """Run ``routine_name`` on an object of ``class_name`` from every bounded initial state.

        States where some object breaks its class invariant, or where the
        precondition fails, are skipped: the verifier assumes both on entry.
        """
        found = self.typed.lookup_routine(class_name, routine_name)
        if found is None:
            raise KeyError(f"{class_name}.{routine_name}")
        routine, owner = found
        creator = routine_name in self.typed.classes[class_name].creators
        report = Exploration(f"{owner}.{routine_name}")
        self.violations = []
        self.pruned = 0
        for heap, current, args in self.initial_states(class_name, routine, overrides):
            if report.states >= max_states:
                report.truncated = True
                break
            if not self._admissible(heap, current, routine, args, creator=creator):
                continue
            report.states += 1
            for _ in self.invoke(current, routine_name, args, heap, creator=creator):
                report.runs += 1
        report.violations = list(self.violations)
        report.pruned = self.pruned
        return report

    def _admissible(
        self, heap: Heap, current: int, routine: src.RoutineDecl, args: list[Any], *, creator: bool
    ) -> bool:
        for obj in heap:
            if (obj != current or not creator) and not self._invariant_holds(self.class_of(heap, obj), obj, heap):
                return False
        act = self._bare_activation(self.class_of(heap, current), current, heap)
        env = {"Current": current, **{f.name: a for f, a in zip(routine.formals, args)}}
        cfg = _Config(heap, env)
        versions = self.typed.versions(self.class_of(heap, current), routine.name)
        try:
            for index, (version, _) in enumerate(versions):
                clauses = version.contract.require if index == 0 else version.contract.require_else
                if (index == 0 or clauses) and all(self._eval(c.expr, act, cfg) for c in clauses):
                    return True
        except _Pruned:
            return False
        return False


def explore_program(
    typed: TypedProgram,
    *,
    by_contract: Iterable[tuple[str, str]] | None = None,
    int_domain: Iterable[int] = INT_DOMAIN,
    max_states: int = MAX_STATES,
) -> list[Exploration]:
    """Explore every effective routine declared in an effective class."""
    interpreter = Interpreter(typed, by_contract=by_contract, int_domain=int_domain)
    results = []
    for owner, routine in typed.routine_sites():
        if typed.classes[owner].deferred or routine.body is None:
            continue
        if (owner, routine.name) in interpreter.by_contract:
            continue
        results.append(interpreter.explore(owner, routine.name, max_states=max_states))
    return results
