"""Whole-program translation."""

from __future__ import annotations

import logging

from ..frontend.typecheck import TypedProgram
from ..ivl import ast as ivl
from ..ivl.wellformed import ensure_well_formed
from .context import DYNAMIC, MODES, TranslationContext
from .frame import infer_frame
from .prelude import build_prelude
from .purity import PurityTable, check_purity
from .routine import translate_routine

logger = logging.getLogger(__name__)


def build_context(typed: TypedProgram, mode: str = DYNAMIC, purity: PurityTable | None = None) -> TranslationContext:
    if mode not in MODES:
        raise ValueError(f"unknown inheritance mode {mode!r}; expected one of {', '.join(MODES)}")
    if purity is None:
        purity = check_purity(typed)
    ctx = TranslationContext(typed, mode=mode, pure=purity.required)
    for owner, routine in typed.routine_sites():
        ctx.frames[(owner, routine.name)] = infer_frame(typed, owner, routine.name)
    return ctx


def translate_program(typed: TypedProgram, mode: str = DYNAMIC, purity: PurityTable | None = None) -> ivl.IvlProgram:
    """Translate a type-checked program; the result is checked for well-formedness."""
    ctx = build_context(typed, mode, purity)
    prelude = build_prelude(typed)
    program = ivl.IvlProgram(
        types=prelude.types,
        constants=prelude.constants,
        globals=prelude.globals,
        functions=list(prelude.functions),
        axioms=list(prelude.axioms),
    )
    for owner, routine in typed.routine_sites():
        part = translate_routine(ctx, owner, routine)
        program.functions.extend(part.functions)
        program.axioms.extend(part.axioms)
        program.procedures.append(part.procedure)
        if part.implementation is not None:
            program.implementations.append(part.implementation)
    logger.debug(
        "translated %d procedure(s), %d axiom(s) in %s mode",
        len(program.procedures),
        len(program.axioms),
        mode,
    )
    return ensure_well_formed(program)
