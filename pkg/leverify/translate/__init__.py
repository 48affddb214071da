"""Lite-Eiffel to IVL translation."""

from .context import DYNAMIC, MODES, STATIC_ONLY, FrameSpec, TranslationContext
from .exceptions import exception_check, translate_body
from .frame import infer_frame
from .inheritance import generate_inheritance_axioms
from .program import build_context, translate_program
from .purity import PurityTable, check_purity
from .routine import translate_routine

__all__ = [
    "DYNAMIC",
    "MODES",
    "STATIC_ONLY",
    "FrameSpec",
    "PurityTable",
    "TranslationContext",
    "build_context",
    "check_purity",
    "exception_check",
    "generate_inheritance_axioms",
    "infer_frame",
    "translate_body",
    "translate_program",
    "translate_routine",
]
