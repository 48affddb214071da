"""Tokenizer for Lite-Eiffel source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .ast import Span

KEYWORDS = frozenset(
    {
        "class",
        "inherit",
        "feature",
        "deferred",
        "do",
        "rescue",
        "require",
        "ensure",
        "invariant",
        "from",
        "until",
        "loop",
        "check",
        "end",
        "create",
        "pure",
        "modify",
        "redefine",
        "local",
        "if",
        "then",
        "elseif",
        "else",
        "and",
        "or",
        "not",
        "implies",
        "old",
        "raise",
        "Current",
        "Result",
        "True",
        "False",
        "Void",
        "Retry",
        "ExcV",
    }
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>:=|/=|<=|>=|[<>=+\-*(){},;:.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def span(self, file: str = "") -> Span:
        return Span(self.line, self.column, file)

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(text: str, file: str = "") -> list[Token]:
    tokens: list[Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(
                f"unexpected character {text[pos]!r}",
                span=Span(line, pos - line_start + 1, file),
            )
        kind = match.lastgroup or ""
        value = match.group()
        column = pos - line_start + 1
        pos = match.end()
        if kind == "nl":
            line += 1
            line_start = pos
            continue
        if kind in {"ws", "comment"}:
            continue
        if kind == "ident" and value in KEYWORDS:
            kind = "keyword"
        tokens.append(Token(kind, value, line, column))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
