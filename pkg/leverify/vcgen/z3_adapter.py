"""Command-line SMT-LIB2 front for z3.

Reads one script on stdin and prints ``sat``, ``unsat`` or ``unknown``,
followed by the model when the answer is ``sat``.
"""

from __future__ import annotations

import argparse
import sys

from ..errors import SolverProtocolError, SolverUnavailable
from .solver import DEFAULT_TIMEOUT, Z3Session


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="leverify-z3", description="Check one SMT-LIB2 script with z3")
    parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="Seconds before answering unknown")
    args = parser.parse_args(argv)
    script = sys.stdin.read()
    try:
        answer, detail = Z3Session(args.timeout).run(script)
    except SolverUnavailable as exc:
        print(str(exc), file=sys.stderr)
        return 3
    except SolverProtocolError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(answer)
    if detail:
        print(detail)
    return 0


if __name__ == "__main__":
    sys.exit(main())
