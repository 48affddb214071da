"""Corpus harness: verify every example and confirm every mutant is caught."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from .pipeline import VERIFY, Progress, RunConfig, run

SOURCE_SUFFIX = ".le"
MUTANTS_DIR = "mutants"


@dataclass
class CorpusResult:
    rows: list[dict[str, Any]]
    report: dict[str, Any]
    exit_code: int


def corpus_files(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    return sorted(directory.glob(f"*{SOURCE_SUFFIX}"))


def corpus_row(entry: dict[str, Any]) -> dict[str, Any]:
    verdicts = [ob["verdict"] for obligations in entry["routines"].values() for ob in obligations]
    seconds = sum(ob["seconds"] for obligations in entry["routines"].values() for ob in obligations)
    return {
        "example": Path(entry["file"]).stem,
        "classes": entry.get("classes", 0),
        "loc": entry.get("loc", 0),
        "obligations": len(verdicts),
        "valid": verdicts.count("valid"),
        "invalid": verdicts.count("invalid"),
        "unknown": verdicts.count("unknown"),
        "seconds": round(seconds, 3),
        "status": entry["status"],
    }


def run_corpus(directory: Path, cfg: RunConfig, progress: Progress | None = None) -> CorpusResult:
    """One row per example in ``directory`` (mutants are not included)."""
    files = corpus_files(directory)
    report, code = run(replace(cfg, inputs=files, mode=VERIFY), progress)
    return CorpusResult([corpus_row(entry) for entry in report["files"]], report, code)


def run_mutants(directory: Path, cfg: RunConfig, progress: Progress | None = None) -> CorpusResult:
    """Every mutant must fail to verify: a row is ``killed`` when some obligation is invalid.

    The exit code is 0 when every mutant is killed, 1 otherwise and 3 when a
    mutant does not even translate.
    """
    files = corpus_files(directory / MUTANTS_DIR)
    report, _ = run(replace(cfg, inputs=files, mode=VERIFY), progress)
    rows = []
    for entry in report["files"]:
        row = corpus_row(entry)
        row["killed"] = row["invalid"] > 0
        rows.append(row)
    if any(row["status"] == "error" for row in rows):
        code = 3
    elif all(row["killed"] for row in rows):
        code = 0
    else:
        code = 1
    return CorpusResult(rows, report, code)
