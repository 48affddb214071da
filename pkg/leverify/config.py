"""Config loading and defaults."""

from __future__ import annotations

import os
from importlib.util import find_spec
from pathlib import Path
from typing import Any

import yaml

from .paths import config_path, ensure_dir
from .schema import validate_config_schema
from .translate import DYNAMIC, MODES
from .util import deep_merge, resolve_env_values
from .vcgen import BUILTIN_Z3, DEFAULT_COMMAND, DEFAULT_TIMEOUT

SOLVER_ENV = "LEVERIFY_SOLVER"
TIMEOUT_ENV = "LEVERIFY_TIMEOUT"


def default_config() -> dict[str, Any]:
    return {
        "solver": {"command": DEFAULT_COMMAND, "timeout": DEFAULT_TIMEOUT},
        "verify": {"mode": DYNAMIC, "jobs": 4},
        "logging": {"path": ""},
        "report": {"enabled": False, "dir": ""},
    }


def load_config(path: Path | None = None) -> dict[str, Any]:
    cfg_path = path or config_path()
    if not cfg_path.exists():
        raise FileNotFoundError(f"Config not found at {cfg_path}")
    with cfg_path.open("r", encoding="utf-8") as handle:
        config = yaml.safe_load(handle) or {}
    if not isinstance(config, dict):
        raise ValueError(f"Config at {cfg_path} must be a mapping")
    return resolve_env_values(deep_merge(default_config(), config))


def save_default_config(path: Path | None = None, overwrite: bool = False) -> Path:
    cfg_path = path or config_path()
    ensure_dir(cfg_path.parent)
    if cfg_path.exists() and not overwrite:
        return cfg_path
    with cfg_path.open("w", encoding="utf-8") as handle:
        yaml.safe_dump(default_config(), handle, sort_keys=False)
    return cfg_path


def resolve_config_path(path_str: str | None) -> Path:
    if path_str:
        return Path(path_str).expanduser()
    return config_path()


def ensure_config_exists(path_str: str | None = None) -> Path:
    cfg_path = resolve_config_path(path_str)
    if not cfg_path.exists():
        cfg_path = save_default_config(cfg_path, overwrite=False)
    return cfg_path


def load_or_default(path_str: str | None = None) -> dict[str, Any]:
    """Config from an explicit or existing file, else the defaults."""
    cfg_path = resolve_config_path(path_str)
    if path_str or cfg_path.exists():
        return load_config(cfg_path)
    return resolve_env_values(default_config())


def solver_settings(
    config: dict[str, Any],
    *,
    command: str | None = None,
    timeout: float | None = None,
) -> tuple[str, float]:
    """Solver command and timeout: flag, then environment, then config, then default."""
    solver_cfg = config.get("solver", {}) or {}
    resolved_command = command or os.environ.get(SOLVER_ENV) or solver_cfg.get("command") or DEFAULT_COMMAND
    if timeout is None:
        env_timeout = os.environ.get(TIMEOUT_ENV)
        if env_timeout:
            try:
                timeout = float(env_timeout)
            except ValueError as exc:
                raise ValueError(f"{TIMEOUT_ENV} must be a number, got {env_timeout!r}") from exc
    if timeout is None:
        timeout = float(solver_cfg.get("timeout") or DEFAULT_TIMEOUT)
    if timeout <= 0:
        raise ValueError(f"solver timeout must be positive, got {timeout}")
    return resolved_command, timeout


def validate_config(config: dict[str, Any]) -> tuple[list[str], list[str]]:
    errors: list[str] = []
    warnings: list[str] = []

    for error in validate_config_schema(config):
        errors.append(f"schema: {error}")

    verify_cfg = config.get("verify", {}) or {}
    mode = verify_cfg.get("mode", DYNAMIC)
    if mode not in MODES:
        errors.append(f"verify.mode must be one of {', '.join(MODES)}")

    command = str((config.get("solver", {}) or {}).get("command") or "")
    uses_z3 = command.strip() == BUILTIN_Z3 or "leverify.vcgen.z3_adapter" in command
    if uses_z3 and find_spec("z3") is None:
        warnings.append("solver uses z3 but the z3-solver package is not installed")
    if command and command.strip() != BUILTIN_Z3 and "{timeout}" not in command:
        warnings.append("solver.command has no {timeout} placeholder; only the client-side timeout applies")

    report_cfg = config.get("report", {}) or {}
    if report_cfg.get("enabled") and not report_cfg.get("dir"):
        warnings.append("report.enabled is set without report.dir; reports go to the state directory")

    return errors, warnings
