"""Config and report schema validation."""

from __future__ import annotations

from typing import Any

from jsonschema import Draft7Validator

_VERDICT = {"enum": ["valid", "invalid", "unknown"]}


def config_schema() -> dict[str, Any]:
    return {
        "type": "object",
        "additionalProperties": True,
        "properties": {
            "solver": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "command": {"type": "string", "minLength": 1},
                    "timeout": {"type": "number", "exclusiveMinimum": 0},
                },
            },
            "verify": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "mode": {"enum": ["dynamic", "static_only"]},
                    "jobs": {"type": "integer", "minimum": 1},
                },
            },
            "logging": {
                "type": "object",
                "additionalProperties": True,
                "properties": {"path": {"type": "string"}},
            },
            "report": {
                "type": "object",
                "additionalProperties": True,
                "properties": {"enabled": {"type": "boolean"}, "dir": {"type": "string"}},
            },
        },
    }


def report_schema() -> dict[str, Any]:
    obligation = {
        "type": "object",
        "required": ["id", "kind", "verdict", "seconds"],
        "properties": {
            "id": {"type": "string"},
            "kind": {"type": "string"},
            "description": {"type": "string"},
            "span": {"type": ["string", "null"]},
            "verdict": _VERDICT,
            "seconds": {"type": "number", "minimum": 0},
        },
    }
    diagnostic = {
        "type": "object",
        "required": ["message", "stage", "code"],
        "properties": {
            "message": {"type": "string"},
            "stage": {"type": "string"},
            "type": {"type": "string"},
            "code": {"type": "string"},
            "hint": {"type": "string"},
            "span": {"type": ["string", "null"]},
        },
    }
    program = {
        "type": "object",
        "required": ["file", "status", "routines"],
        "properties": {
            "file": {"type": "string"},
            "status": {"enum": ["valid", "invalid", "unknown", "error", "emitted"]},
            "classes": {"type": "integer", "minimum": 0},
            "loc": {"type": "integer", "minimum": 0},
            "routines": {"type": "object", "additionalProperties": {"type": "array", "items": obligation}},
            "errors": {"type": "array", "items": diagnostic},
        },
    }
    return {
        "type": "object",
        "required": ["run_id", "mode", "inheritance", "status", "exit_code", "files", "summary"],
        "properties": {
            "run_id": {"type": "string"},
            "mode": {"enum": ["verify", "emit-boogie", "emit-smt"]},
            "inheritance": {"enum": ["dynamic", "static_only"]},
            "status": {"enum": ["valid", "invalid", "unknown", "error", "emitted"]},
            "exit_code": {"enum": [0, 1, 2, 3]},
            "files": {"type": "array", "items": program},
            "summary": {
                "type": "object",
                "required": ["obligations", "valid", "invalid", "unknown", "errors"],
                "properties": {
                    key: {"type": "integer", "minimum": 0}
                    for key in ("obligations", "valid", "invalid", "unknown", "errors")
                },
            },
        },
    }


def _messages(validator: Draft7Validator, instance: Any) -> list[str]:
    errors = []
    for error in sorted(validator.iter_errors(instance), key=lambda e: list(e.path)):
        path = ".".join(str(part) for part in error.path)
        prefix = f"{path}: " if path else ""
        errors.append(prefix + error.message)
    return errors


def validate_config_schema(config: dict[str, Any]) -> list[str]:
    return _messages(Draft7Validator(config_schema()), config)


def validate_report(report: dict[str, Any]) -> list[str]:
    return _messages(Draft7Validator(report_schema()), report)
