"""Recursive-descent parser producing a SourceProgram."""

from __future__ import annotations

from ..errors import ParseError
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
    RoutineContract,
    RoutineDecl,
    SourceProgram,
    Stmt,
    Unary,
    VoidLit,
)
from .lexer import Token, tokenize

_EXPR_START_KEYWORDS = frozenset({"not", "old", "Current", "Result", "True", "False", "Void", "ExcV"})
_ROUTINE_START = frozenset({"pure", "require", "modify", "local", "do", "deferred"})
_COMPARISONS = frozenset({"=", "/=", "<", "<=", ">", ">="})
_EXPR_EXPECTED = frozenset({"integer", "identifier", "(", "-", *sorted(_EXPR_START_KEYWORDS)})


class Parser:
    def __init__(self, tokens: list[Token], file: str = "") -> None:
        self.tokens = tokens
        self.pos = 0
        self.file = file
        self._in_rescue = False

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind in {"keyword", "op"} and tok.text in texts

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        raise self.error(frozenset({text}))

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind == "ident":
            return self.advance()
        raise self.error(frozenset({"identifier"}))

    def error(self, expected: frozenset[str], message: str | None = None) -> ParseError:
        tok = self.peek()
        if message is None:
            wanted = ", ".join(sorted(expected))
            message = f"unexpected {tok.describe()}; expected one of: {wanted}"
        return ParseError(message, span=tok.span(self.file), expected=expected)

    def span(self, tok: Token):
        return tok.span(self.file)

    # program structure

    def parse_program(self) -> SourceProgram:
        classes: list[ClassDecl] = []
        while self.peek().kind != "eof":
            if not self.at("class", "deferred"):
                raise self.error(frozenset({"class", "deferred"}))
            classes.append(self.parse_class())
        root = None
        for cls in classes:
            if cls.routine("main") is not None:
                root = (cls.name, "main")
                break
        return SourceProgram(classes, root)

    def parse_class(self) -> ClassDecl:
        start = self.peek()
        deferred = self.accept("deferred") is not None
        self.expect("class")
        name = self.expect_ident().text
        cls = ClassDecl(name=name, deferred=deferred, span=self.span(start))
        if self.accept("inherit"):
            cls.parent = self.expect_ident().text
            if self.accept("redefine"):
                cls.redefines = self.parse_ident_list()
                self.expect("end")
        if self.accept("create"):
            cls.creators = self.parse_ident_list()
        while self.accept("feature"):
            while self.peek().kind == "ident":
                self.parse_feature(cls)
        if self.accept("invariant"):
            cls.invariant = self.parse_clauses()
        self.expect("end")
        return cls

    def parse_ident_list(self) -> list[str]:
        names = [self.expect_ident().text]
        while self.accept(","):
            names.append(self.expect_ident().text)
        return names

    def parse_modify_list(self) -> list[str]:
        """Entries are ``attr`` or ``formal.attr``."""
        entries = []
        while True:
            entry = self.expect_ident().text
            if self.accept("."):
                entry += "." + self.expect_ident().text
            entries.append(entry)
            if not self.accept(","):
                return entries

    def parse_feature(self, cls: ClassDecl) -> None:
        first = self.peek()
        names = self.parse_ident_list()
        if len(names) > 1:
            self.expect(":")
            type_name = self.parse_type()
            for name in names:
                cls.attributes.append(Decl(name, type_name, span=self.span(first)))
            return
        name = names[0]
        if self.at("("):
            cls.routines.append(self.parse_routine(name, first))
            return
        if self.accept(":"):
            type_name = self.parse_type()
            if self.at(*_ROUTINE_START):
                cls.routines.append(self.parse_routine(name, first, result_type=type_name))
            else:
                cls.attributes.append(Decl(name, type_name, span=self.span(first)))
            return
        if self.at(*_ROUTINE_START):
            cls.routines.append(self.parse_routine(name, first))
            return
        raise self.error(frozenset({":", "(", *sorted(_ROUTINE_START)}))

    def parse_type(self) -> str:
        return self.expect_ident().text

    def parse_decl_groups(self, separator_required: bool) -> list[Decl]:
        decls: list[Decl] = []
        while True:
            first = self.peek()
            names = self.parse_ident_list()
            self.expect(":")
            type_name = self.parse_type()
            decls.extend(Decl(n, type_name, span=self.span(first)) for n in names)
            if self.accept(";"):
                continue
            if separator_required:
                break
            if self.peek().kind == "ident" and self.peek(1).text in {":", ","}:
                continue
            break
        return decls

    def parse_routine(self, name: str, first: Token, result_type: str | None = None) -> RoutineDecl:
        routine = RoutineDecl(name=name, span=self.span(first))
        if self.accept("("):
            if not self.at(")"):
                routine.formals = self.parse_decl_groups(separator_required=True)
            self.expect(")")
            if self.accept(":"):
                result_type = self.parse_type()
        routine.result_type = result_type
        contract = RoutineContract()
        routine.contract = contract
        if self.accept("pure"):
            routine.pure = True
        if self.accept("require"):
            if self.accept("else"):
                contract.require_else = self.parse_clauses()
            else:
                contract.require = self.parse_clauses()
        if self.accept("modify"):
            routine.modify = self.parse_modify_list()
        if self.accept("local"):
            routine.locals = self.parse_decl_groups(separator_required=False)
        if self.accept("deferred"):
            routine.body = None
        elif self.accept("do"):
            routine.body = self.parse_stmts()
        else:
            raise self.error(frozenset({"do", "deferred"}))
        if self.accept("ensure"):
            if self.accept("then"):
                contract.ensure_then = self.parse_clauses()
            else:
                contract.ensure = self.parse_clauses()
        if self.at("rescue") and self.peek(1).text == "invariant":
            self.advance()
            self.advance()
            contract.rescue_invariant = self.parse_clauses()
        if self.accept("rescue"):
            self._in_rescue = True
            try:
                routine.rescue = self.parse_stmts()
            finally:
                self._in_rescue = False
        self.expect("end")
        return routine

    def parse_clauses(self) -> list[Clause]:
        clauses: list[Clause] = []
        while self.starts_expr():
            start = self.peek()
            tag = None
            if start.kind == "ident" and self.peek(1).text == ":":
                tag = self.advance().text
                self.advance()
            expr = self.parse_expr()
            clauses.append(Clause(expr, tag, span=self.span(start)))
            self.accept(";")
        return clauses

    # statements

    def starts_stmt(self) -> bool:
        tok = self.peek()
        if tok.kind == "ident":
            return True
        return tok.kind == "keyword" and tok.text in {
            "Result",
            "Retry",
            "Current",
            "if",
            "from",
            "check",
            "create",
            "raise",
        }

    def parse_stmts(self) -> list[Stmt]:
        stmts: list[Stmt] = []
        while self.starts_stmt():
            stmts.append(self.parse_stmt())
            self.accept(";")
        return stmts

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        if self.at("if"):
            return self.parse_if()
        if self.at("from"):
            return self.parse_loop()
        if self.at("check"):
            self.advance()
            clauses = self.parse_clauses()
            self.expect("end")
            return Check(clauses, span=self.span(tok))
        if self.at("raise"):
            self.advance()
            return Raise(span=self.span(tok))
        if self.at("create"):
            return self.parse_create_stmt()
        if self.at("Retry"):
            self.advance()
            if not self._in_rescue:
                raise ParseError(
                    "Retry may only be assigned inside a rescue clause",
                    span=self.span(tok),
                    expected=frozenset({"rescue"}),
                )
            self.expect(":=")
            return RetryAssign(self.parse_expr(), span=self.span(tok))
        if (tok.kind == "ident" or self.at("Result")) and self.peek(1).text == ":=":
            target = self.advance().text
            self.advance()
            if self.at("create"):
                return self.parse_create_expr(target, tok)
            return Assign(target, self.parse_expr(), span=self.span(tok))
        expr = self.parse_postfix()
        if not isinstance(expr, Access) or expr.kind is not None:
            raise ParseError("expected a routine call", span=self.span(tok), expected=frozenset({":=", "."}))
        return CallStmt(expr, span=self.span(tok))

    def parse_create_expr(self, target: str, tok: Token) -> Create:
        self.expect("create")
        self.expect("{")
        class_name = self.parse_type()
        self.expect("}")
        routine, args = None, ()
        if self.accept("."):
            routine = self.expect_ident().text
            args = self.parse_args() if self.at("(") else ()
        return Create(target, class_name, routine, args, span=self.span(tok))

    def parse_create_stmt(self) -> Create:
        tok = self.expect("create")
        class_name = None
        if self.accept("{"):
            class_name = self.parse_type()
            self.expect("}")
        target = self.expect_ident().text
        routine, args = None, ()
        if self.accept("."):
            routine = self.expect_ident().text
            args = self.parse_args() if self.at("(") else ()
        return Create(target, class_name, routine, args, span=self.span(tok))

    def parse_if(self) -> If:
        tok = self.expect("if")
        branches: list[tuple[Expr, list[Stmt]]] = []
        cond = self.parse_expr()
        self.expect("then")
        branches.append((cond, self.parse_stmts()))
        orelse: list[Stmt] = []
        while True:
            if self.accept("elseif"):
                cond = self.parse_expr()
                self.expect("then")
                branches.append((cond, self.parse_stmts()))
                continue
            if self.accept("else"):
                orelse = self.parse_stmts()
            break
        self.expect("end")
        return If(branches, orelse, span=self.span(tok))

    def parse_loop(self) -> Loop:
        tok = self.expect("from")
        init = self.parse_stmts()
        invariant: list[Clause] = []
        if self.accept("invariant"):
            invariant = self.parse_clauses()
        self.expect("until")
        until = self.parse_expr()
        self.expect("loop")
        body = self.parse_stmts()
        self.expect("end")
        return Loop(init, invariant, until, body, span=self.span(tok))

    # expressions

    def starts_expr(self) -> bool:
        tok = self.peek()
        if tok.kind in {"int", "ident"}:
            return True
        if tok.kind == "keyword":
            return tok.text in _EXPR_START_KEYWORDS
        return tok.kind == "op" and tok.text in {"(", "-"}

    def parse_expr(self) -> Expr:
        return self.parse_implies()

    def parse_implies(self) -> Expr:
        left = self.parse_or()
        tok = self.peek()
        if self.accept("implies"):
            right = self.parse_implies()
            return Binary("implies", left, right, span=self.span(tok))
        return left

    def parse_or(self) -> Expr:
        left = self.parse_and()
        while self.at("or"):
            tok = self.advance()
            left = Binary("or", left, self.parse_and(), span=self.span(tok))
        return left

    def parse_and(self) -> Expr:
        left = self.parse_comparison()
        while self.at("and"):
            tok = self.advance()
            left = Binary("and", left, self.parse_comparison(), span=self.span(tok))
        return left

    def parse_comparison(self) -> Expr:
        left = self.parse_additive()
        if self.peek().kind == "op" and self.peek().text in _COMPARISONS:
            tok = self.advance()
            return Binary(tok.text, left, self.parse_additive(), span=self.span(tok))
        return left

    def parse_additive(self) -> Expr:
        left = self.parse_multiplicative()
        while self.at("+", "-"):
            tok = self.advance()
            left = Binary(tok.text, left, self.parse_multiplicative(), span=self.span(tok))
        return left

    def parse_multiplicative(self) -> Expr:
        left = self.parse_unary()
        while self.at("*"):
            tok = self.advance()
            left = Binary("*", left, self.parse_unary(), span=self.span(tok))
        return left

    def parse_unary(self) -> Expr:
        tok = self.peek()
        if self.accept("not"):
            return Unary("not", self.parse_unary(), span=self.span(tok))
        if self.accept("-"):
            return Unary("-", self.parse_unary(), span=self.span(tok))
        if self.accept("old"):
            return Old(self.parse_unary(), span=self.span(tok))
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_atom()
        while self.at("."):
            self.advance()
            tok = self.expect_ident()
            args = self.parse_args() if self.at("(") else None
            expr = Access(expr, tok.text, args, span=self.span(tok))
        return expr

    def parse_args(self) -> tuple[Expr, ...]:
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")")
        return tuple(args)

    def parse_atom(self) -> Expr:
        tok = self.peek()
        span = self.span(tok)
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text), span=span)
        if tok.kind == "ident":
            self.advance()
            args = self.parse_args() if self.at("(") else None
            return Access(None, tok.text, args, span=span)
        if self.accept("("):
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if self.accept("True"):
            return BoolLit(True, span=span)
        if self.accept("False"):
            return BoolLit(False, span=span)
        if self.accept("Void"):
            return VoidLit(span=span)
        if self.accept("Current"):
            return CurrentRef(span=span)
        if self.accept("Result"):
            return ResultRef(span=span)
        if self.accept("ExcV"):
            return ExcVRef(span=span)
        raise self.error(_EXPR_EXPECTED)


def parse(source_text: str, file: str = "") -> SourceProgram:
    """Parse Lite-Eiffel text; raises ParseError on the first syntax error."""
    parser = Parser(tokenize(source_text, file), file)
    return parser.parse_program()
