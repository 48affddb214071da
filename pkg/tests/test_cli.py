import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import TestCase, mock

from leverify.cli import HELP_TOPICS, build_parser, cmd_help, cmd_verify, main

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


class ParserTests(TestCase):
    def test_verify_flags(self) -> None:
        args = build_parser().parse_args(["verify", "a.le", "b.le", "--static-only", "--jobs", "2"])
        self.assertIs(args.func, cmd_verify)
        self.assertEqual(args.files, ["a.le", "b.le"])
        self.assertTrue(args.static_only)
        self.assertEqual(args.jobs, 2)
        self.assertIsNone(args.timeout)

    def test_emit_modes_are_exclusive(self) -> None:
        parser = build_parser()
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit) as ctx:
            parser.parse_args(["verify", "a.le", "--emit-boogie", "x", "--emit-smt", "y"])
        self.assertEqual(ctx.exception.code, 2)

    def test_command_required(self) -> None:
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit):
            build_parser().parse_args([])


class HelpTests(TestCase):
    def test_topics(self) -> None:
        for topic in [None, *HELP_TOPICS]:
            with self.subTest(topic=topic):
                out = io.StringIO()
                with redirect_stdout(out):
                    code = cmd_help(build_parser().parse_args(["help"] + ([topic] if topic else [])))
                self.assertEqual(code, 0)
                self.assertEqual(out.getvalue(), HELP_TOPICS[topic or "overview"])

    def test_unknown_topic(self) -> None:
        err = io.StringIO()
        with redirect_stderr(err):
            self.assertEqual(cmd_help(build_parser().parse_args(["help", "boogie"])), 1)
        self.assertIn("unknown help topic: boogie", err.getvalue())


class MainTests(TestCase):
    def setUp(self) -> None:
        self.temp = tempfile.TemporaryDirectory()
        self.addCleanup(self.temp.cleanup)
        self.dir = Path(self.temp.name)
        env = {k: v for k, v in os.environ.items() if not k.startswith("LEVERIFY_")}
        env.update({"XDG_CONFIG_HOME": str(self.dir / "config"), "XDG_STATE_HOME": str(self.dir / "state")})
        patcher = mock.patch.dict(os.environ, env, clear=True)
        patcher.start()
        self.addCleanup(patcher.stop)
        self.config = self.dir / "config.yaml"

    def invoke(self, *argv: str) -> tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err), self.assertRaises(SystemExit) as ctx:
            main(list(argv))
        return ctx.exception.code, out.getvalue(), err.getvalue()

    def test_init_and_validate(self) -> None:
        code, out, _ = self.invoke("init", "--config", str(self.config))
        self.assertEqual(code, 0)
        self.assertIn(str(self.config), out)
        self.assertTrue(self.config.exists())
        code, _, err = self.invoke("validate", "--config", str(self.config))
        self.assertEqual(code, 0)
        self.assertNotIn("error:", err)

    def test_verify_json(self) -> None:
        self.invoke("init", "--config", str(self.config))
        code, out, _ = self.invoke(
            "verify", str(CORPUS / "counter.le"), "--config", str(self.config),
            "--solver", "echo unsat", "--json", "--quiet",
        )
        self.assertEqual(code, 0)
        record = json.loads(out)
        self.assertEqual(record["status"], "valid")
        self.assertEqual(record["inheritance"], "dynamic")

    def test_verify_text_report_and_csv(self) -> None:
        self.invoke("init", "--config", str(self.config))
        table = self.dir / "out" / "table.csv"
        code, out, err = self.invoke(
            "verify", str(CORPUS / "counter.le"), "--config", str(self.config),
            "--solver", "echo sat", "--report", str(table),
        )
        self.assertEqual(code, 1)
        self.assertIn("COUNTER.add", out)
        self.assertIn("counter.le: parse", err)
        self.assertEqual(len(table.read_text(encoding="utf-8").splitlines()), 2)

    def test_emit_prints_paths(self) -> None:
        self.invoke("init", "--config", str(self.config))
        target = self.dir / "bpl"
        code, out, _ = self.invoke(
            "verify", str(CORPUS / "cell.le"), "--config", str(self.config), "--emit-boogie", str(target), "--quiet"
        )
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), str(target / "cell.bpl"))

    def test_bad_timeout(self) -> None:
        self.invoke("init", "--config", str(self.config))
        code, _, err = self.invoke(
            "verify", str(CORPUS / "counter.le"), "--config", str(self.config), "--timeout", "0"
        )
        self.assertEqual(code, 3)
        self.assertTrue(err.startswith("error:"))

    def test_missing_config(self) -> None:
        code, _, err = self.invoke("verify", str(CORPUS / "counter.le"), "--config", str(self.dir / "absent.yaml"))
        self.assertEqual(code, 3)
        self.assertIn("Config not found", err)

    def test_mutants_all_killed(self) -> None:
        self.invoke("init", "--config", str(self.config))
        code, out, _ = self.invoke(
            "corpus", str(CORPUS), "--mutants", "--config", str(self.config), "--solver", "echo sat", "--quiet"
        )
        self.assertEqual(code, 0)
        self.assertNotIn("surviving mutants", out)
        self.assertIn("transmission_frame", out)
