"""Boogie-subset intermediate verification language."""

from .ast import IvlProgram
from .printer import print_boogie
from .structure import skeleton, to_structured
from .wellformed import ensure_well_formed, well_formed

__all__ = ["IvlProgram", "ensure_well_formed", "print_boogie", "skeleton", "to_structured", "well_formed"]
