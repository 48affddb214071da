"""Boogie text rendering of IVL programs."""

from __future__ import annotations

from .ast import (
    Assert,
    Assign,
    Assume,
    Axiom,
    BinOp,
    Block,
    BoolLit,
    Break,
    Call,
    ConstDecl,
    Continue,
    Expr,
    FunApp,
    FunctionDecl,
    GlobalVar,
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
    TypeDecl,
    UnOp,
    Var,
    While,
)

INDENT = "  "


def format_expr(expr: Expr) -> str:
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Old):
        return f"old({format_expr(expr.operand)})"
    if isinstance(expr, FunApp):
        return f"{expr.name}(" + ", ".join(format_expr(a) for a in expr.args) + ")"
    if isinstance(expr, MapSelect):
        return f"{_atom(expr.heap)}[{format_expr(expr.obj)}, {format_expr(expr.field)}]"
    if isinstance(expr, MapStore):
        return (
            f"{_atom(expr.heap)}[{format_expr(expr.obj)}, {format_expr(expr.field)} := "
            f"{format_expr(expr.value)}]"
        )
    if isinstance(expr, UnOp):
        # "-(1)" is negation, "-1" a literal
        if expr.op == "-":
            return f"-({format_expr(expr.operand)})"
        return f"{expr.op}{_atom(expr.operand)}"
    if isinstance(expr, BinOp):
        return f"{_atom(expr.left)} {expr.op} {_atom(expr.right)}"
    if isinstance(expr, Quant):
        bound = ", ".join(f"{name}: {sort}" for name, sort in expr.bound)
        return f"({expr.kind} {bound} :: {format_expr(expr.body)})"
    raise TypeError(f"not an IVL expression: {expr!r}")


def _atom(expr: Expr) -> str:
    text = format_expr(expr)
    if isinstance(expr, (BinOp, UnOp)):
        return f"({text})"
    return text


def _params(params: list[tuple[str, str]] | tuple[tuple[str, str], ...]) -> str:
    return ", ".join(f"{name}: {sort}" for name, sort in params)


def _signature(name: str, params, returns) -> str:
    text = f"{name}({_params(params)})"
    if returns:
        text += f" returns ({_params(returns)})"
    return text


def format_stmts(stmts: list[Stmt], depth: int) -> list[str]:
    lines: list[str] = []
    pending_label: str | None = None
    for stmt in stmts:
        merged = isinstance(stmt, While) and stmt.label is not None and stmt.label == pending_label
        lines.extend(format_stmt(stmt, depth, skip_label=merged))
        pending_label = stmt.label if isinstance(stmt, Block) else None
    return lines


def format_stmt(stmt: Stmt, depth: int, *, skip_label: bool = False) -> list[str]:
    pad = INDENT * depth
    label_pad = INDENT * max(depth - 1, 0)
    if isinstance(stmt, Assign):
        return [f"{pad}{stmt.target} := {format_expr(stmt.value)};"]
    if isinstance(stmt, Havoc):
        return [f"{pad}havoc {', '.join(stmt.names)};"]
    if isinstance(stmt, Assert):
        return [f"{pad}assert {format_expr(stmt.expr)};"]
    if isinstance(stmt, Call):
        lhs = f"{', '.join(stmt.lhs)} := " if stmt.lhs else ""
        args = ", ".join(format_expr(a) for a in stmt.args)
        return [f"{pad}call {lhs}{stmt.procedure}({args});"]
    if isinstance(stmt, If):
        cond = format_expr(stmt.cond)
        if len(stmt.then) == 1 and not stmt.orelse and isinstance(stmt.then[0], (Goto, Break, Continue)):
            return [f"{pad}if ({cond}) {{ {format_stmt(stmt.then[0], 0)[0]} }}"]
        lines = [f"{pad}if ({cond}) {{"]
        lines.extend(format_stmts(stmt.then, depth + 1))
        if stmt.orelse:
            lines.append(f"{pad}}} else {{")
            lines.extend(format_stmts(stmt.orelse, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, While):
        lines = []
        if stmt.label and not skip_label:
            lines.append(f"{label_pad}{stmt.label}:")
        lines.append(f"{pad}while ({format_expr(stmt.cond)})")
        for inv in stmt.invariants:
            prefix = "free invariant" if inv.free else "invariant"
            lines.append(f"{pad}{INDENT}{prefix} {format_expr(inv.expr)};")
        lines.append(f"{pad}{{")
        lines.extend(format_stmts(stmt.body, depth + 1))
        lines.append(f"{pad}}}")
        return lines
    if isinstance(stmt, Block):
        lines = format_stmts(stmt.body, depth)
        lines.append(f"{label_pad}{stmt.label}:")
        return lines
    if isinstance(stmt, (Goto, Continue)):
        return [f"{pad}goto {stmt.label};"]
    if isinstance(stmt, Break):
        return [f"{pad}break {stmt.label};"]
    if isinstance(stmt, Return):
        return [f"{pad}return;"]
    if isinstance(stmt, Assume):
        return [f"{pad}assume {format_expr(stmt.expr)};"]
    raise TypeError(f"not an IVL statement: {stmt!r}")


def format_procedure(proc: Procedure) -> list[str]:
    lines = [f"procedure {_signature(proc.name, proc.params, proc.returns)};"]
    for spec in proc.requires:
        prefix = "free requires" if spec.free else "requires"
        lines.append(f"{INDENT}{prefix} {format_expr(spec.expr)};")
    if proc.modifies:
        lines.append(f"{INDENT}modifies {', '.join(proc.modifies)};")
    for spec in proc.ensures:
        prefix = "free ensures" if spec.free else "ensures"
        lines.append(f"{INDENT}{prefix} {format_expr(spec.expr)};")
    return lines


def format_implementation(impl: Implementation) -> list[str]:
    lines = [f"implementation {_signature(impl.name, impl.params, impl.returns)}", "{"]
    for name, sort in impl.locals:
        lines.append(f"{INDENT}var {name}: {sort};")
    if impl.locals:
        lines.append("")
    lines.append(f"{INDENT}entry:")
    lines.extend(format_stmts(impl.body, 2))
    lines.append("}")
    return lines


def format_decl(decl: TypeDecl | ConstDecl | GlobalVar | FunctionDecl | Axiom) -> str:
    if isinstance(decl, TypeDecl):
        return f"type {decl.name};" if decl.alias is None else f"type {decl.name} = {decl.alias};"
    if isinstance(decl, ConstDecl):
        unique = "unique " if decl.unique else ""
        return f"const {unique}{decl.name}: {decl.sort};"
    if isinstance(decl, GlobalVar):
        return f"var {decl.name}: {decl.sort};"
    if isinstance(decl, FunctionDecl):
        return f"function {decl.name}({_params(decl.params)}): {decl.result};"
    comment = f"// {decl.comment}\n" if decl.comment else ""
    return f"{comment}axiom {format_expr(decl.expr)};"


def print_boogie(program: IvlProgram) -> str:
    """Deterministic Boogie rendering; each procedure is followed by its implementation."""
    sections: list[str] = []
    for group in (program.types, program.constants, program.globals, program.functions, program.axioms):
        if group:
            sections.append("\n".join(format_decl(decl) for decl in group))
    implementations = {impl.name: impl for impl in program.implementations}
    for proc in program.procedures:
        lines = format_procedure(proc)
        impl = implementations.get(proc.name)
        if impl is not None:
            lines.append("")
            lines.extend(format_implementation(impl))
        sections.append("\n".join(lines))
    return "\n\n".join(sections) + "\n"
