"""Verification runs: staged pipeline, run log and exit status."""

from __future__ import annotations

import json
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .errors import PurityFailed, TypeCheckFailed, VerifierError
from .frontend import parse, typecheck
from .ivl import IvlProgram, print_boogie
from .paths import emit_dir, log_file
from .report import write_report
from .translate import DYNAMIC, MODES, check_purity, translate_program
from .util import classify_exception, count_loc, read_source
from .vcgen import (
    DEFAULT_COMMAND,
    DEFAULT_TIMEOUT,
    INVALID,
    UNKNOWN,
    VALID,
    SolverClient,
    SolverVerdict,
    VerificationCondition,
    check,
    emit_smt,
    generate_vcs,
)

VERIFY = "verify"
EMIT_BOOGIE = "emit-boogie"
EMIT_SMT = "emit-smt"
RUN_MODES = (VERIFY, EMIT_BOOGIE, EMIT_SMT)

ERROR = "error"
EMITTED = "emitted"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

Progress = Callable[[str, str, str], None]


@dataclass
class RunConfig:
    inputs: list[Path]
    mode: str = VERIFY
    inheritance: str = DYNAMIC
    solver_command: str = DEFAULT_COMMAND
    timeout: float = DEFAULT_TIMEOUT
    output_dir: Path | None = None
    jobs: int = 1
    config: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in RUN_MODES:
            raise ValueError(f"unknown run mode {self.mode!r}")
        if self.inheritance not in MODES:
            raise ValueError(f"unknown inheritance mode {self.inheritance!r}")
        if self.mode != VERIFY and self.output_dir is None:
            raise ValueError(f"{self.mode} needs an output directory")

    def solver(self) -> SolverClient:
        return SolverClient(self.solver_command, self.timeout)


def _append_log(record: dict[str, Any], config: dict[str, Any], entry: dict[str, Any]) -> None:
    record.setdefault("logs", []).append(entry)
    log_cfg = config.get("logging", {}) or {}
    path = log_cfg.get("path")
    if not path:
        return
    try:
        with log_file(str(path)).open("a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry, ensure_ascii=True) + "\n")
    except OSError:
        return


def diagnostics(exc: Exception, stage: str) -> list[dict[str, Any]]:
    """Report entries for a failed stage; type-check and purity failures yield one per error."""
    grouped = isinstance(exc, (TypeCheckFailed, PurityFailed)) and exc.errors
    errors: list[Exception] = list(exc.errors) if grouped else [exc]
    entries = []
    for error in errors:
        code, hint = classify_exception(error)
        span = error.location() if isinstance(error, VerifierError) else ""
        entries.append(
            {
                "message": str(error),
                "stage": stage,
                "type": error.__class__.__name__,
                "code": code,
                "hint": hint,
                "span": span or None,
            }
        )
    return entries


def compile_source(text: str, *, file: str = "", inheritance: str = DYNAMIC) -> IvlProgram:
    """Front end and translation in one step."""
    typed = typecheck(parse(text, file))
    return translate_program(typed, inheritance, check_purity(typed))


def check_all(vcs: list[VerificationCondition], solver: SolverClient, jobs: int = 1) -> list[SolverVerdict]:
    """Verdicts in the order of ``vcs``; each check runs its own solver session."""
    if jobs > 1 and len(vcs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(check, vc, solver) for vc in vcs]
            return [future.result() for future in futures]
    return [check(vc, solver) for vc in vcs]


def _obligation(vc: VerificationCondition, verdict: SolverVerdict) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "id": vc.id,
        "kind": vc.kind,
        "description": vc.description,
        "span": str(vc.span) if vc.span else None,
        "verdict": verdict.status,
        "seconds": round(verdict.seconds, 4),
    }
    if verdict.status == INVALID and verdict.model:
        entry["model"] = verdict.model
    if verdict.status == UNKNOWN and verdict.reason:
        entry["reason"] = verdict.reason
    return entry


def _file_status(routines: dict[str, list[dict[str, Any]]]) -> str:
    verdicts = {ob["verdict"] for obligations in routines.values() for ob in obligations}
    if INVALID in verdicts:
        return INVALID
    if UNKNOWN in verdicts:
        return UNKNOWN
    return VALID


def _emit_dir(cfg: RunConfig, path: Path) -> Path:
    assert cfg.output_dir is not None
    return emit_dir(cfg.output_dir, path, several_inputs=len(cfg.inputs) > 1)


class _FileRun:
    def __init__(self, cfg: RunConfig, record: dict[str, Any], path: Path, progress: Progress | None) -> None:
        self.cfg = cfg
        self.record = record
        self.path = path
        self.progress = progress
        self.stage = "parse"

    def log(self, entry: dict[str, Any]) -> None:
        _append_log(self.record, self.cfg.config, {"run_id": self.record["run_id"], "file": str(self.path), **entry})

    def run_stage(self, stage: str, fn: Callable[..., Any], *args: Any) -> Any:
        self.stage = stage
        start_mono = time.monotonic()
        self.log({"stage": stage, "phase": "start", "ts": time.time()})
        if self.progress:
            self.progress(str(self.path), stage, "start")
        try:
            result = fn(*args)
        except Exception as exc:
            code, _ = classify_exception(exc)
            self.log(
                {
                    "stage": stage,
                    "phase": "end",
                    "status": "error",
                    "duration_s": time.monotonic() - start_mono,
                    "ts": time.time(),
                    "error": {"code": code, "message": str(exc)},
                }
            )
            raise
        self.log(
            {
                "stage": stage,
                "phase": "end",
                "status": "ok",
                "duration_s": time.monotonic() - start_mono,
                "ts": time.time(),
            }
        )
        if self.progress:
            self.progress(str(self.path), stage, "end")
        return result

    def execute(self) -> dict[str, Any]:
        entry: dict[str, Any] = {"file": str(self.path), "status": VALID, "classes": 0, "loc": 0, "routines": {}}
        try:
            text = read_source(self.path)
            entry["loc"] = count_loc(text)
            program = self.run_stage("parse", parse, text, str(self.path))
            entry["classes"] = len(program.classes)
            typed = self.run_stage("typecheck", typecheck, program)
            purity = self.run_stage("purity", check_purity, typed)
            ivl_program = self.run_stage("translate", translate_program, typed, self.cfg.inheritance, purity)
            if self.cfg.mode == EMIT_BOOGIE:
                target = _emit_dir(self.cfg, self.path) / f"{self.path.stem}.bpl"
                target.write_text(print_boogie(ivl_program), encoding="utf-8")
                self.record.setdefault("emitted", []).append(str(target))
                entry["status"] = EMITTED
                return entry
            vcs = self.run_stage("vcgen", generate_vcs, ivl_program)
            if self.cfg.mode == EMIT_SMT:
                out_dir = _emit_dir(self.cfg, self.path)
                for vc in vcs:
                    target = out_dir / vc.filename
                    target.write_text(emit_smt(vc), encoding="utf-8")
                    self.record.setdefault("emitted", []).append(str(target))
                entry["status"] = EMITTED
                return entry
            verdicts = self.run_stage("check", check_all, vcs, self.cfg.solver(), self.cfg.jobs)
        except Exception as exc:
            entry["status"] = ERROR
            entry["errors"] = diagnostics(exc, self.stage)
            return entry
        routines: dict[str, list[dict[str, Any]]] = {}
        for vc, verdict in zip(vcs, verdicts):
            routines.setdefault(vc.procedure, []).append(_obligation(vc, verdict))
        entry["routines"] = routines
        entry["status"] = _file_status(routines)
        return entry


def exit_code(files: list[dict[str, Any]]) -> int:
    statuses = {entry["status"] for entry in files}
    if ERROR in statuses:
        return EXIT_ERROR
    if INVALID in statuses:
        return EXIT_INVALID
    if UNKNOWN in statuses:
        return EXIT_UNKNOWN
    return EXIT_OK


_STATUS_FOR_EXIT = {EXIT_ERROR: ERROR, EXIT_INVALID: INVALID, EXIT_UNKNOWN: UNKNOWN}


def summarize(files: list[dict[str, Any]]) -> dict[str, Any]:
    summary = {"obligations": 0, VALID: 0, INVALID: 0, UNKNOWN: 0, "errors": 0, "seconds": 0.0}
    for entry in files:
        summary["errors"] += len(entry.get("errors", []))
        for obligations in entry["routines"].values():
            for ob in obligations:
                summary["obligations"] += 1
                summary[ob["verdict"]] += 1
                summary["seconds"] += ob["seconds"]
    summary["seconds"] = round(summary["seconds"], 4)
    return summary


def run(cfg: RunConfig, progress: Progress | None = None) -> tuple[dict[str, Any], int]:
    """Verify or emit every input file; returns the report and the exit code."""
    record: dict[str, Any] = {
        "run_id": uuid.uuid4().hex,
        "mode": cfg.mode,
        "inheritance": cfg.inheritance,
    }
    files = [_FileRun(cfg, record, path, progress).execute() for path in cfg.inputs]
    code = exit_code(files)
    if code == EXIT_OK:
        status = EMITTED if cfg.mode != VERIFY else VALID
    else:
        status = _STATUS_FOR_EXIT[code]
    record.update(
        {
            "status": status,
            "exit_code": code,
            "files": files,
            "summary": summarize(files),
        }
    )
    report_path = write_report(record, cfg.config)
    if report_path:
        record["report_path"] = report_path
    return record, code
