"""Verification condition generation and solver interaction."""

from .passify import passify
from .smt import emit_smt
from .solver import (
    BUILTIN_Z3,
    DEFAULT_COMMAND,
    DEFAULT_TIMEOUT,
    INVALID,
    UNKNOWN,
    VALID,
    SolverClient,
    SolverVerdict,
    Z3Session,
    check,
)
from .wp import VerificationCondition, generate_vcs

__all__ = [
    "BUILTIN_Z3",
    "DEFAULT_COMMAND",
    "DEFAULT_TIMEOUT",
    "INVALID",
    "UNKNOWN",
    "VALID",
    "SolverClient",
    "SolverVerdict",
    "VerificationCondition",
    "Z3Session",
    "check",
    "emit_smt",
    "generate_vcs",
    "passify",
]
