"""Where leverify reads its config and writes logs, reports and emitted files."""

from __future__ import annotations

import os
from pathlib import Path

APP_NAME = "leverify"
CONFIG_ENV = "LEVERIFY_CONFIG"


def _base(env_key: str, fallback: str) -> Path:
    return Path(os.environ.get(env_key) or fallback).expanduser()


def config_dir() -> Path:
    return _base("XDG_CONFIG_HOME", "~/.config") / APP_NAME


def state_dir() -> Path:
    return _base("XDG_STATE_HOME", "~/.local/state") / APP_NAME


def config_path() -> Path:
    override = os.environ.get(CONFIG_ENV)
    return Path(override).expanduser() if override else config_dir() / "config.yaml"


def reports_dir() -> Path:
    return state_dir() / "reports"


def log_file(setting: str) -> Path:
    """Expanded ``logging.path``, with its parent directory created."""
    path = Path(setting).expanduser()
    return ensure_dir(path.parent) / path.name


def emit_dir(output_dir: Path, source: Path, *, several_inputs: bool) -> Path:
    """Target for files emitted from ``source``; one subdirectory per input when there are several."""
    return ensure_dir(output_dir / source.stem if several_inputs else output_dir)


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path
