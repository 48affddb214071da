"""Pretty-printer for Lite-Eiffel ASTs; its output parses back to an equal AST."""

from __future__ import annotations

from .ast import (
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
    Stmt,
    Unary,
    VoidLit,
)

INDENT = "\t"


def format_expr(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, BoolLit):
        return "True" if expr.value else "False"
    if isinstance(expr, VoidLit):
        return "Void"
    if isinstance(expr, CurrentRef):
        return "Current"
    if isinstance(expr, ResultRef):
        return "Result"
    if isinstance(expr, ExcVRef):
        return "ExcV"
    if isinstance(expr, Access):
        text = expr.name
        if expr.target is not None:
            text = f"{_operand(expr.target)}.{text}"
        if expr.args is not None:
            text += " (" + ", ".join(format_expr(arg) for arg in expr.args) + ")"
        return text
    if isinstance(expr, Old):
        return f"old {_operand(expr.operand)}"
    if isinstance(expr, Unary):
        sep = " " if expr.op == "not" else ""
        return f"{expr.op}{sep}{_operand(expr.operand)}"
    if isinstance(expr, Binary):
        return f"{_operand(expr.left)} {expr.op} {_operand(expr.right)}"
    raise TypeError(f"not an expression: {expr!r}")


def _operand(expr: Expr) -> str:
    text = format_expr(expr)
    if isinstance(expr, (Binary, Unary, Old)):
        return f"({text})"
    return text


def _clauses(clauses: list[Clause], depth: int) -> list[str]:
    texts = [(f"{clause.tag}: " if clause.tag else "") + format_expr(clause.expr) for clause in clauses]
    lines = []
    for index, text in enumerate(texts):
        following = texts[index + 1] if index + 1 < len(texts) else ""
        # a clause opening with "(" or "-" would otherwise continue the previous one
        if following.startswith(("(", "-")):
            text += ";"
        lines.append(INDENT * depth + text)
    return lines


def _decl_groups(decls: list[Decl]) -> list[str]:
    groups: list[tuple[list[str], str]] = []
    for decl in decls:
        if groups and groups[-1][1] == decl.type_name:
            groups[-1][0].append(decl.name)
        else:
            groups.append(([decl.name], decl.type_name))
    return [f"{', '.join(names)}: {type_name}" for names, type_name in groups]


def format_stmts(stmts: list[Stmt], depth: int) -> list[str]:
    lines: list[str] = []
    for stmt in stmts:
        lines.extend(format_stmt(stmt, depth))
    return lines


def format_stmt(stmt: Stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    if isinstance(stmt, Assign):
        return [f"{pad}{stmt.target} := {format_expr(stmt.value)}"]
    if isinstance(stmt, RetryAssign):
        return [f"{pad}Retry := {format_expr(stmt.value)}"]
    if isinstance(stmt, Create):
        if stmt.class_name is None:
            text = f"{pad}create {stmt.target}"
        else:
            text = f"{pad}{stmt.target} := create {{{stmt.class_name}}}"
        if stmt.routine is not None:
            text += f".{stmt.routine}"
            if stmt.args:
                text += " (" + ", ".join(format_expr(arg) for arg in stmt.args) + ")"
        return [text]
    if isinstance(stmt, CallStmt):
        return [pad + format_expr(stmt.call)]
    if isinstance(stmt, If):
        lines = []
        for index, (cond, body) in enumerate(stmt.branches):
            keyword = "if" if index == 0 else "elseif"
            lines.append(f"{pad}{keyword} {format_expr(cond)} then")
            lines.extend(format_stmts(body, depth + 1))
        if stmt.orelse:
            lines.append(f"{pad}else")
            lines.extend(format_stmts(stmt.orelse, depth + 1))
        lines.append(f"{pad}end")
        return lines
    if isinstance(stmt, Loop):
        lines = [f"{pad}from"]
        lines.extend(format_stmts(stmt.init, depth + 1))
        if stmt.invariant:
            lines.append(f"{pad}invariant")
            lines.extend(_clauses(stmt.invariant, depth + 1))
        lines.append(f"{pad}until")
        lines.append(INDENT * (depth + 1) + format_expr(stmt.until))
        lines.append(f"{pad}loop")
        lines.extend(format_stmts(stmt.body, depth + 1))
        lines.append(f"{pad}end")
        return lines
    if isinstance(stmt, Check):
        return [f"{pad}check", *_clauses(stmt.clauses, depth + 1), f"{pad}end"]
    if isinstance(stmt, Raise):
        return [f"{pad}raise"]
    raise TypeError(f"not a statement: {stmt!r}")


def format_routine(routine: RoutineDecl, depth: int = 1) -> list[str]:
    pad = INDENT * depth
    inner = INDENT * (depth + 1)
    header = pad + routine.name
    if routine.formals:
        header += " (" + "; ".join(_decl_groups(routine.formals)) + ")"
    if routine.result_type:
        header += f": {routine.result_type}"
    lines = [header]
    contract = routine.contract
    if routine.pure:
        lines.append(f"{inner}pure")
    if contract.require:
        lines.append(f"{inner}require")
        lines.extend(_clauses(contract.require, depth + 2))
    if contract.require_else:
        lines.append(f"{inner}require else")
        lines.extend(_clauses(contract.require_else, depth + 2))
    if routine.modify is not None:
        lines.append(f"{inner}modify {', '.join(routine.modify)}")
    if routine.locals:
        lines.append(f"{inner}local")
        lines.extend(INDENT * (depth + 2) + group for group in _decl_groups(routine.locals))
    if routine.body is None:
        lines.append(f"{inner}deferred")
    else:
        lines.append(f"{inner}do")
        lines.extend(format_stmts(routine.body, depth + 2))
    if contract.ensure:
        lines.append(f"{inner}ensure")
        lines.extend(_clauses(contract.ensure, depth + 2))
    if contract.ensure_then:
        lines.append(f"{inner}ensure then")
        lines.extend(_clauses(contract.ensure_then, depth + 2))
    if contract.rescue_invariant:
        lines.append(f"{inner}rescue invariant")
        lines.extend(_clauses(contract.rescue_invariant, depth + 2))
    if routine.rescue is not None:
        lines.append(f"{inner}rescue")
        lines.extend(format_stmts(routine.rescue, depth + 2))
    lines.append(f"{inner}end")
    return lines


def format_class(cls: ClassDecl) -> list[str]:
    header = ("deferred " if cls.deferred else "") + f"class {cls.name}"
    lines = [header]
    if cls.parent:
        lines.append(f"inherit {cls.parent}")
        if cls.redefines:
            lines.append(f"{INDENT}redefine {', '.join(cls.redefines)} end")
    if cls.creators:
        lines.append(f"create {', '.join(cls.creators)}")
    if cls.attributes or cls.routines:
        lines.append("feature")
        lines.extend(INDENT + group for group in _attribute_lines(cls.attributes))
        for routine in cls.routines:
            lines.extend(format_routine(routine))
    if cls.invariant:
        lines.append("invariant")
        lines.extend(_clauses(cls.invariant, 1))
    lines.append("end")
    return lines


def _attribute_lines(attributes: list[Decl]) -> list[str]:
    return _decl_groups(attributes)


def format_program(program: SourceProgram) -> str:
    """Render ``program`` as Lite-Eiffel text."""
    blocks = ["\n".join(format_class(cls)) for cls in program.classes]
    return "\n\n".join(blocks) + "\n"
