"""Lite-Eiffel front end: lexing, parsing, type checking and printing."""

from .parser import parse
from .printer import format_program
from .typecheck import TypedProgram, typecheck

__all__ = ["TypedProgram", "format_program", "parse", "typecheck"]
