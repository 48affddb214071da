"""Utility helpers."""

from __future__ import annotations

import json
import os
import re
import sys
from pathlib import Path
from typing import Any

from .errors import VerifierError


def write_json(obj: Any) -> None:
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=True, sort_keys=False)
    sys.stdout.write("\n")


def read_source(path: Path) -> str:
    with path.open("r", encoding="utf-8") as handle:
        return handle.read()


def count_loc(text: str) -> int:
    """Non-blank lines that are not only a ``--`` comment."""
    return sum(1 for line in text.splitlines() if line.strip() and not line.strip().startswith("--"))


def deep_merge(base: Any, overlay: Any) -> Any:
    if isinstance(base, dict) and isinstance(overlay, dict):
        merged = dict(base)
        for key, value in overlay.items():
            if key in merged:
                merged[key] = deep_merge(merged[key], value)
            else:
                merged[key] = value
        return merged
    return overlay


_ENV_PATTERN = re.compile(r"\$\{ENV:([A-Z0-9_]+)\}")


def resolve_env_values(value: Any) -> Any:
    if isinstance(value, dict):
        if set(value.keys()) == {"_env"}:
            name = str(value.get("_env", ""))
            return os.environ.get(name, "")
        return {k: resolve_env_values(v) for k, v in value.items()}
    if isinstance(value, list):
        return [resolve_env_values(v) for v in value]
    if isinstance(value, str):

        def _replace(match: re.Match[str]) -> str:
            return os.environ.get(match.group(1), "")

        return _ENV_PATTERN.sub(_replace, value)
    return value


def classify_exception(exc: Exception) -> tuple[str, str]:
    if isinstance(exc, VerifierError):
        return (exc.code, exc.hint)
    if isinstance(exc, FileNotFoundError):
        return ("NOT_FOUND", "Verify file paths and configuration.")
    if isinstance(exc, UnicodeDecodeError):
        return ("PARSE_ERROR", "Source files must be UTF-8 text.")
    if isinstance(exc, ValueError):
        return ("CONFIG_ERROR", "Check configuration values and formats.")
    return ("VERIFY_ERROR", "Inspect error message and configuration.")
