"""CLI entrypoint for leverify."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any

from .config import (
    ensure_config_exists,
    load_config,
    load_or_default,
    save_default_config,
    solver_settings,
    validate_config,
)
from .corpus import CorpusResult, corpus_row, run_corpus, run_mutants
from .pipeline import EMIT_BOOGIE, EMIT_SMT, EXIT_ERROR, VERIFY, RunConfig, run
from .report import corpus_csv, render_corpus, render_report
from .schema import validate_report
from .translate import DYNAMIC, STATIC_ONLY
from .util import write_json


def _progress(quiet: bool):
    if quiet:
        return None

    def report(file: str, stage: str, phase: str) -> None:
        if phase == "start":
            sys.stderr.write(f"{file}: {stage}\n")

    return report


def _run_config(args: argparse.Namespace, inputs: list[Path], config: dict[str, Any]) -> RunConfig:
    command, timeout = solver_settings(config, command=args.solver, timeout=args.timeout)
    verify_cfg = config.get("verify", {}) or {}
    inheritance = STATIC_ONLY if args.static_only else verify_cfg.get("mode", DYNAMIC)
    jobs = args.jobs if args.jobs is not None else int(verify_cfg.get("jobs") or 1)
    mode, output_dir = VERIFY, None
    if getattr(args, "emit_boogie", None):
        mode, output_dir = EMIT_BOOGIE, Path(args.emit_boogie).expanduser()
    elif getattr(args, "emit_smt", None):
        mode, output_dir = EMIT_SMT, Path(args.emit_smt).expanduser()
    return RunConfig(
        inputs=inputs,
        mode=mode,
        inheritance=inheritance,
        solver_command=command,
        timeout=timeout,
        output_dir=output_dir,
        jobs=max(1, jobs),
        config=config,
    )


def _write_csv(path: str, rows: list[dict[str, Any]]) -> None:
    target = Path(path).expanduser()
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(corpus_csv(rows), encoding="utf-8")


def cmd_init(args: argparse.Namespace) -> int:
    cfg_path = save_default_config(path=Path(args.config).expanduser() if args.config else None, overwrite=args.force)
    sys.stdout.write(f"Initialized config at {cfg_path}\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        config = load_or_default(args.config)
        cfg = _run_config(args, [Path(p).expanduser() for p in args.files], config)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    record, code = run(cfg, _progress(args.quiet))
    if args.report:
        _write_csv(args.report, [corpus_row(entry) for entry in record["files"]])
    if args.json:
        for problem in validate_report(record):
            sys.stderr.write(f"warning: report schema: {problem}\n")
        write_json(record)
    elif cfg.mode == VERIFY:
        sys.stdout.write(render_report(record))
    else:
        for path in record.get("emitted", []):
            sys.stdout.write(f"{path}\n")
        for entry in record["files"]:
            for error in entry.get("errors", []):
                sys.stderr.write(f"error: {entry['file']}: {error['message']}\n")
    return code


def _print_corpus(result: CorpusResult, args: argparse.Namespace) -> None:
    if args.report:
        _write_csv(args.report, result.rows)
    if args.json:
        write_json({"rows": result.rows, "exit_code": result.exit_code, "report": result.report})
        return
    sys.stdout.write(render_corpus(result.rows))
    if args.mutants:
        survivors = [row["example"] for row in result.rows if not row.get("killed")]
        if survivors:
            sys.stdout.write(f"\nsurviving mutants: {', '.join(survivors)}\n")


def cmd_corpus(args: argparse.Namespace) -> int:
    directory = Path(args.directory).expanduser()
    try:
        config = load_or_default(args.config)
        cfg = _run_config(args, [], config)
        runner = run_mutants if args.mutants else run_corpus
        result = runner(directory, cfg, _progress(args.quiet))
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    _print_corpus(result, args)
    return result.exit_code


def cmd_validate(args: argparse.Namespace) -> int:
    config = load_config(ensure_config_exists(args.config))
    errors, warnings = validate_config(config)
    for warning in warnings:
        sys.stderr.write(f"warning: {warning}\n")
    for error in errors:
        sys.stderr.write(f"error: {error}\n")
    return 1 if errors else 0


HELP_TOPICS = {
    "overview": (
        "leverify quick help\n"
        "\n"
        "Verify Lite-Eiffel files:\n"
        "  leverify verify corpus/expression.le\n"
        "  leverify verify corpus/expression.le --static-only\n"
        "  leverify verify prog.le --json > report.json\n"
        "\n"
        "Inspect the translation:\n"
        "  leverify verify prog.le --emit-boogie out/\n"
        "  leverify verify prog.le --emit-smt out/\n"
        "\n"
        "Corpus:\n"
        "  leverify corpus corpus/ --report table.csv\n"
        "  leverify corpus corpus/ --mutants\n"
        "\n"
        "More:\n"
        "  leverify help config      # config file and solver settings\n"
        "  leverify help exit-codes  # automation semantics\n"
        "  leverify help errors      # diagnostic codes\n"
        "  leverify help language    # Lite-Eiffel summary\n"
    ),
    "config": (
        "Config location:\n"
        "  ~/.config/leverify/config.yaml (override with LEVERIFY_CONFIG or --config)\n"
        "\n"
        "Keys:\n"
        "  solver.command  command template; {python} and {timeout} are substituted,\n"
        "                  'builtin:z3' runs z3 in-process\n"
        "  solver.timeout  seconds per obligation\n"
        "  verify.mode     dynamic | static_only\n"
        "  verify.jobs     obligations checked concurrently\n"
        "  logging.path    JSONL stage log (empty disables)\n"
        "  report.enabled  write a markdown report per run\n"
        "  report.dir      where reports go\n"
        "\n"
        "Precedence: flag > environment (LEVERIFY_SOLVER, LEVERIFY_TIMEOUT) > config > default.\n"
    ),
    "exit-codes": (
        "Exit codes:\n"
        "  0  every obligation valid (or emission succeeded)\n"
        "  1  some obligation invalid\n"
        "  2  some obligation unknown (timeout or solver gave up)\n"
        "  3  front-end, translation, solver or config error\n"
        "\n"
        "corpus --mutants exits 0 when every mutant is caught, 1 otherwise.\n"
    ),
    "errors": (
        "Diagnostic codes:\n"
        "  PARSE_ERROR        Syntax error in a source file\n"
        "  TYPE_ERROR         Type or declaration error\n"
        "  IVL_ERROR          Malformed intermediate program (a translator bug)\n"
        "  RESCUE_INVARIANT   Rescue clause without a rescue invariant\n"
        "  FRAME_ERROR        Postcondition reads a location with no supported receiver\n"
        "  PURITY_ERROR       Contract calls a routine that writes the heap\n"
        "  SOLVER_UNAVAILABLE Solver command missing or crashed\n"
        "  SOLVER_PROTOCOL    Solver printed no verdict\n"
        "  NOT_FOUND          Missing file or directory\n"
        "  CONFIG_ERROR       Invalid configuration\n"
        "  VERIFY_ERROR       Any other failure\n"
        "\n"
        "Each diagnostic carries a source span and a hint.\n"
    ),
    "language": (
        "Lite-Eiffel in brief:\n"
        "  [deferred] class NAME [inherit PARENT [redefine r, ... end]] [create make, ...]\n"
        "  feature\n"
        "    attr: TYPE\n"
        "    routine (x: T): R pure require ... modify a, b local ... do ... ensure ...\n"
        "      rescue invariant ... rescue ... end\n"
        "  invariant ...\n"
        "  end\n"
        "\n"
        "Statements: :=, calls, create {C} x.make (...), if/elseif/else, from ... until ... loop,\n"
        "check ... end, raise, Retry := ... (rescue only).\n"
        "Postconditions may use old, Result and ExcV; clauses without ExcV only bind\n"
        "on normal termination.\n"
    ),
}


def cmd_help(args: argparse.Namespace) -> int:
    topic = (args.topic or "overview").lower()
    if topic not in HELP_TOPICS:
        sys.stderr.write(f"unknown help topic: {topic}\n")
        sys.stderr.write(f"available: {', '.join(HELP_TOPICS)}\n")
        return 1
    sys.stdout.write(HELP_TOPICS[topic])
    return 0


def build_parser() -> argparse.ArgumentParser:
    epilog = (
        "Examples:\n"
        "  leverify init\n"
        "  leverify verify corpus/transmission.le\n"
        "  leverify verify corpus/expression.le --static-only\n"
        "  leverify corpus corpus/ --report table.csv\n"
        "\n"
        "More help:\n"
        "  leverify help [overview|config|exit-codes|errors|language]\n"
    )
    parser = argparse.ArgumentParser(
        prog="leverify",
        description="Static verifier for Lite-Eiffel",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=epilog,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to config file (or set LEVERIFY_CONFIG)")
    common.add_argument("--quiet", action="store_true", help="Suppress progress output")

    checking = argparse.ArgumentParser(add_help=False)
    checking.add_argument("--static-only", action="store_true", help="Reason about calls from static types only")
    checking.add_argument("--solver", help="Solver command template (or set LEVERIFY_SOLVER)")
    checking.add_argument("--timeout", type=float, help="Seconds per obligation (or set LEVERIFY_TIMEOUT)")
    checking.add_argument("--jobs", type=int, help="Obligations checked concurrently (default: verify.jobs)")
    checking.add_argument("--report", help="Write the CSV summary table to this path")
    checking.add_argument("--json", action="store_true", help="Print the full run report as JSON")

    init_cmd = sub.add_parser("init", parents=[common], help="Initialize default config")
    init_cmd.add_argument("--force", action="store_true", help="Overwrite config if it exists")
    init_cmd.set_defaults(func=cmd_init)

    verify_cmd = sub.add_parser("verify", parents=[common, checking], help="Verify Lite-Eiffel files")
    verify_cmd.add_argument("files", nargs="+", help="Source files")
    emit = verify_cmd.add_mutually_exclusive_group()
    emit.add_argument("--emit-boogie", metavar="DIR", help="Write the intermediate program instead of verifying")
    emit.add_argument("--emit-smt", metavar="DIR", help="Write one SMT-LIB script per obligation")
    verify_cmd.set_defaults(func=cmd_verify)

    corpus_cmd = sub.add_parser("corpus", parents=[common, checking], help="Verify every example in a directory")
    corpus_cmd.add_argument("directory", help="Corpus directory")
    corpus_cmd.add_argument("--mutants", action="store_true", help="Check that every mutant under mutants/ fails")
    corpus_cmd.set_defaults(func=cmd_corpus)

    validate_cmd = sub.add_parser("validate", parents=[common], help="Validate config")
    validate_cmd.set_defaults(func=cmd_validate)

    help_cmd = sub.add_parser("help", help="Show extended help topics")
    help_cmd.add_argument("topic", nargs="?", help="overview|config|exit-codes|errors|language")
    help_cmd.set_defaults(func=cmd_help)

    return parser


def main(argv: list[str] | None = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    sys.exit(args.func(args))


if __name__ == "__main__":
    main()
