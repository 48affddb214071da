"""Solver sessions and verdicts."""

from __future__ import annotations

import logging
import shlex
import subprocess
import sys
import time
from dataclasses import dataclass

from ..errors import SolverProtocolError, SolverUnavailable
from .smt import emit_smt
from .wp import VerificationCondition

logger = logging.getLogger(__name__)

VALID = "valid"
INVALID = "invalid"
UNKNOWN = "unknown"
VERDICTS = (VALID, INVALID, UNKNOWN)

BUILTIN_Z3 = "builtin:z3"
DEFAULT_COMMAND = "{python} -m leverify.vcgen.z3_adapter --timeout {timeout}"
DEFAULT_TIMEOUT = 10.0
# extra wall time granted to an external solver beyond its own timeout
_GRACE = 5.0

_ANSWERS = {"unsat": VALID, "sat": INVALID, "unknown": UNKNOWN, "timeout": UNKNOWN}


@dataclass
class SolverVerdict:
    status: str
    seconds: float
    model: str = ""
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.status == VALID


def parse_answer(stdout: str) -> tuple[str, str]:
    """First ``sat``/``unsat``/``unknown`` line and whatever follows it."""
    lines = [line.strip() for line in stdout.splitlines()]
    for position, line in enumerate(lines):
        if line in _ANSWERS:
            return line, "\n".join(rest for rest in lines[position + 1 :] if rest)
    snippet = stdout.strip()[:200]
    raise SolverProtocolError(f"unparseable solver response: {snippet!r}")


class Z3Session:
    """In-process z3; every run gets its own context."""

    def __init__(self, timeout: float = DEFAULT_TIMEOUT) -> None:
        self.timeout = timeout

    def run(self, script: str) -> tuple[str, str]:
        try:
            import z3
        except ImportError as exc:
            raise SolverUnavailable("the z3 Python package is not installed") from exc
        ctx = z3.Context()
        solver = z3.Solver(ctx=ctx)
        solver.set("timeout", max(1, int(self.timeout * 1000)))
        try:
            solver.from_string(script)
        except z3.Z3Exception as exc:
            raise SolverProtocolError(f"z3 rejected the script: {exc}") from exc
        result = solver.check()
        if result == z3.unsat:
            return "unsat", ""
        if result == z3.sat:
            return "sat", str(solver.model())
        return "unknown", solver.reason_unknown()


@dataclass
class SolverClient:
    """Runs one SMT-LIB2 script per check through a configurable command.

    ``{python}`` and ``{timeout}`` in the command template are replaced by the
    current interpreter and the per-VC timeout in seconds. The value
    ``builtin:z3`` uses :class:`Z3Session` in-process.
    """

    command: str = DEFAULT_COMMAND
    timeout: float = DEFAULT_TIMEOUT

    def argv(self) -> list[str]:
        rendered = self.command.replace("{python}", shlex.quote(sys.executable)).replace(
            "{timeout}", f"{self.timeout:g}"
        )
        return shlex.split(rendered)

    def run(self, script: str) -> tuple[str, str]:
        if self.command.strip() == BUILTIN_Z3:
            return Z3Session(self.timeout).run(script)
        cmd = self.argv()
        if not cmd:
            raise SolverUnavailable("solver command is empty")
        try:
            proc = subprocess.run(
                cmd,
                input=script,
                text=True,
                capture_output=True,
                timeout=self.timeout + _GRACE,
            )
        except subprocess.TimeoutExpired:
            return "timeout", ""
        except OSError as exc:
            raise SolverUnavailable(f"cannot start solver {cmd[0]}: {exc}") from exc
        try:
            return parse_answer(proc.stdout)
        except SolverProtocolError:
            if proc.returncode != 0:
                raise SolverUnavailable(
                    f"solver {cmd[0]} exited with status {proc.returncode}: {proc.stderr.strip()}"
                ) from None
            raise


def check(vc: VerificationCondition, solver: SolverClient) -> SolverVerdict:
    script = emit_smt(vc)
    start = time.monotonic()
    answer, detail = solver.run(script)
    seconds = time.monotonic() - start
    status = _ANSWERS[answer]
    logger.debug("%s: %s (%.3fs)", vc.id, status, seconds)
    if status == INVALID:
        return SolverVerdict(status, seconds, model=detail)
    if status == UNKNOWN:
        return SolverVerdict(status, seconds, reason=detail or answer)
    return SolverVerdict(status, seconds)
