"""Human- and machine-readable run reports."""

from __future__ import annotations

import csv
import io
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from .paths import ensure_dir, reports_dir

CORPUS_COLUMNS = ("example", "classes", "loc", "obligations", "valid", "invalid", "unknown", "seconds")


def _failures(data: dict[str, Any]) -> list[str]:
    lines = []
    for entry in data.get("files", []):
        for error in entry.get("errors", []) or []:
            where = f" at {error['span']}" if error.get("span") else ""
            lines.append(f"- {entry['file']}: [{error['stage']}] {error['code']}{where}: {error['message']}")
        for procedure, obligations in (entry.get("routines") or {}).items():
            for ob in obligations:
                if ob["verdict"] == "valid":
                    continue
                where = ob.get("span") or procedure
                lines.append(f"- {ob['kind']} at {where} ({ob['verdict']}): {procedure}: {ob.get('description', '')}")
    return lines


def render_report(data: dict[str, Any]) -> str:
    summary = data.get("summary", {}) or {}
    lines = [f"# leverify run report ({data.get('run_id') or 'unknown'})", ""]
    lines.append(f"Generated: {datetime.now(timezone.utc).isoformat()}")
    lines.append("")
    lines.append(f"- mode: {data.get('mode')}")
    lines.append(f"- inheritance: {data.get('inheritance')}")
    lines.append(f"- status: {data.get('status')} (exit {data.get('exit_code')})")
    lines.append(
        "- obligations: {obligations} ({valid} valid, {invalid} invalid, {unknown} unknown)".format(
            obligations=summary.get("obligations", 0),
            valid=summary.get("valid", 0),
            invalid=summary.get("invalid", 0),
            unknown=summary.get("unknown", 0),
        )
    )
    lines.append("")
    failures = _failures(data)
    if failures:
        lines.append("## Failures")
        lines.extend(failures)
        lines.append("")
    for entry in data.get("files", []):
        lines.append(f"## {entry['file']} ({entry['status']})")
        for procedure, obligations in (entry.get("routines") or {}).items():
            lines.append("")
            lines.append(f"### {procedure}")
            lines.append("")
            lines.append("| obligation | kind | verdict | seconds |")
            lines.append("| --- | --- | --- | --- |")
            for ob in obligations:
                lines.append(f"| {ob['id']} | {ob['kind']} | {ob['verdict']} | {ob['seconds']:.3f} |")
        lines.append("")
    return "\n".join(lines)


def write_report(data: dict[str, Any], config: dict[str, Any]) -> str | None:
    report_cfg = config.get("report", {}) or {}
    if not report_cfg.get("enabled"):
        return None
    out_dir = ensure_dir(Path(report_cfg["dir"]).expanduser()) if report_cfg.get("dir") else ensure_dir(reports_dir())
    path = out_dir / f"{data.get('run_id') or 'unknown'}.md"
    path.write_text(render_report(data), encoding="utf-8")
    return str(path)


def corpus_csv(rows: list[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CORPUS_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def render_corpus(rows: list[dict[str, Any]]) -> str:
    lines = ["| " + " | ".join(CORPUS_COLUMNS) + " |", "|" + " --- |" * len(CORPUS_COLUMNS)]
    for row in rows:
        lines.append("| " + " | ".join(str(row.get(column, "")) for column in CORPUS_COLUMNS) + " |")
    return "\n".join(lines) + "\n"
