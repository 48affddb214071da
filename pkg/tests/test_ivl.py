from pathlib import Path
from unittest import TestCase

from leverify.errors import WellFormednessError
from leverify.ivl import ast as ivl
from leverify.ivl import print_boogie, skeleton, to_structured, well_formed
from leverify.ivl.printer import format_expr
from leverify.pipeline import compile_source

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"


def _add_program(body: list[ivl.Stmt], modifies: list[str] | None = None) -> ivl.IvlProgram:
    x, n = ivl.Var("x"), ivl.Var("n")
    proc = ivl.Procedure(
        "P",
        [("n", ivl.INT)],
        modifies=["x"] if modifies is None else modifies,
        ensures=[ivl.Spec(ivl.eq(x, ivl.BinOp("+", ivl.Old(x), n)))],
    )
    impl = ivl.Implementation("P", [("n", ivl.INT)], body=body)
    return ivl.IvlProgram(globals=[ivl.GlobalVar("x", ivl.INT)], procedures=[proc], implementations=[impl])


def _increment() -> list[ivl.Stmt]:
    return [ivl.Assign("x", ivl.BinOp("+", ivl.Var("x"), ivl.Var("n")))]


def _join(*states: bool | None) -> bool | None:
    """``None`` is unreachable, ``False`` means ExcV is known false, ``True`` that it may hold."""
    reachable = [s for s in states if s is not None]
    return any(reachable) if reachable else None


def _is_excv(expr: ivl.Expr) -> bool:
    return expr == ivl.Var(ivl.EXCV_VAR)


class _ExceptionFlow:
    """Forward pass over a body recording instructions reachable with ExcV possibly true."""

    def __init__(self) -> None:
        self.offending: list[ivl.Stmt] = []
        self.targets: dict[str, list[bool | None]] = {}

    def instruction(self, stmt: ivl.Stmt, state: bool | None) -> None:
        if state and not any(stmt is seen for seen in self.offending):
            self.offending.append(stmt)

    def collect(self, label: str | None, body: list[ivl.Stmt], state: bool | None) -> list[bool | None]:
        """End state of ``body`` followed by the states of jumps to ``label``."""
        outer = self.targets.get(label) if label else None
        if label:
            self.targets[label] = []
        end = self.seq(body, state)
        jumps = self.targets.pop(label) if label else []
        if outer is not None:
            self.targets[label] = outer
        return [end, *jumps]

    def seq(self, stmts: list[ivl.Stmt], state: bool | None) -> bool | None:
        for stmt in stmts:
            state = self.stmt(stmt, state)
        return state

    def stmt(self, stmt: ivl.Stmt, state: bool | None) -> bool | None:
        if isinstance(stmt, ivl.Assign) and stmt.target == ivl.EXCV_VAR:
            return None if state is None else stmt.value != ivl.FALSE
        if isinstance(stmt, (ivl.Assign, ivl.Havoc)):
            self.instruction(stmt, state)
            return state
        if isinstance(stmt, ivl.Call):
            self.instruction(stmt, state)
            return None if state is None else True
        if isinstance(stmt, ivl.If):
            if _is_excv(stmt.cond):
                then_in, else_in = (state or None), (None if state is None else False)
            else:
                then_in = else_in = state
            return _join(self.seq(stmt.then, then_in), self.seq(stmt.orelse, else_in))
        if isinstance(stmt, ivl.Block):
            return _join(*self.collect(stmt.label, stmt.body, state))
        if isinstance(stmt, ivl.While):
            head = state
            while True:
                body_in = (head or None) if _is_excv(stmt.cond) else head
                jumps = self.collect(stmt.label, stmt.body, body_in)
                widened = _join(head, *jumps)
                if widened == head:
                    break
                head = widened
            return (None if head is None else False) if _is_excv(stmt.cond) else head
        if isinstance(stmt, (ivl.Goto, ivl.Break, ivl.Continue)):
            self.targets[stmt.label].append(state)
            return None
        if isinstance(stmt, ivl.Return):
            return None
        return state


class ExceptionFlowTests(TestCase):
    def test_corpus_instructions_never_run_with_pending_exception(self) -> None:
        for path in sorted((ROOT / "corpus").glob("*.le")):
            program = compile_source(path.read_text(encoding="utf-8"), file=str(path))
            for impl in program.implementations:
                with self.subTest(routine=impl.name):
                    flow = _ExceptionFlow()
                    flow.seq(impl.body, False)
                    self.assertEqual(flow.offending, [])

    def test_unchecked_call_is_detected(self) -> None:
        after = ivl.Assign("x", ivl.IntLit(1))
        flow = _ExceptionFlow()
        flow.seq([ivl.Call("Q", ()), after], False)
        self.assertEqual(flow.offending, [after])

    def test_rescue_loop_must_clear_the_exception(self) -> None:
        work = ivl.Assign("x", ivl.IntLit(2))
        excv = ivl.Var(ivl.EXCV_VAR)
        for reset, expected in [([ivl.Assign(ivl.EXCV_VAR, ivl.FALSE)], []), ([], [work])]:
            loop = ivl.While(excv, [], [*reset, work], label="excL")
            flow = _ExceptionFlow()
            attempt = ivl.Block("excL", [ivl.Call("Q", ()), ivl.If(excv, [ivl.Goto("excL")])])
            flow.seq([attempt, loop], False)
            self.assertEqual(flow.offending, expected)


class PrinterTests(TestCase):
    def test_procedure_and_implementation(self) -> None:
        text = print_boogie(_add_program(_increment()))
        expected = (
            "var x: int;\n"
            "\n"
            "procedure P(n: int);\n"
            "  modifies x;\n"
            "  ensures x == (old(x) + n);\n"
            "\n"
            "implementation P(n: int)\n"
            "{\n"
            "  entry:\n"
            "    x := x + n;\n"
            "}\n"
        )
        self.assertEqual(text, expected)

    def test_negative_literal_and_free_specs(self) -> None:
        proc = ivl.Procedure(
            "Q",
            [],
            requires=[ivl.Spec(ivl.BinOp(">", ivl.Var("x"), ivl.IntLit(-1)), free=True)],
        )
        text = print_boogie(ivl.IvlProgram(globals=[ivl.GlobalVar("x", ivl.INT)], procedures=[proc]))
        self.assertIn("free requires x > -1;", text)

    def test_translated_program_prints(self) -> None:
        program = compile_source((ROOT / "corpus" / "counter.le").read_text(encoding="utf-8"))
        text = print_boogie(program)
        self.assertIn("procedure COUNTER.add(", text)
        self.assertIn("implementation COUNTER.add(", text)
        self.assertIn("var Heap: HeapType;", text)

    def test_distinct_expressions_print_differently(self) -> None:
        x, y, z = ivl.Var("x"), ivl.Var("y"), ivl.Var("z")
        one = ivl.IntLit(1)
        exprs = [
            ivl.IntLit(-1),
            ivl.UnOp("-", one),
            ivl.BinOp("-", ivl.IntLit(0), one),
            ivl.BinOp("-", ivl.BinOp("-", x, y), z),
            ivl.BinOp("-", x, ivl.BinOp("-", y, z)),
            ivl.BinOp("-", x, ivl.IntLit(-1)),
            ivl.BinOp("-", x, ivl.UnOp("-", one)),
            ivl.UnOp("!", ivl.BinOp("&&", x, y)),
            ivl.BinOp("&&", ivl.UnOp("!", x), y),
            ivl.Old(ivl.MapSelect(ivl.Var("Heap"), x, y)),
            ivl.MapSelect(ivl.Old(ivl.Var("Heap")), x, y),
            ivl.Quant("forall", (("x", ivl.INT),), ivl.BinOp("==>", x, y)),
            ivl.BinOp("==>", ivl.Quant("forall", (("x", ivl.INT),), x), y),
        ]
        texts = [format_expr(expr) for expr in exprs]
        self.assertEqual(len(set(texts)), len(exprs), texts)

    def test_distinct_programs_print_differently(self) -> None:
        checked = ivl.Spec(ivl.BinOp(">", ivl.Var("x"), ivl.IntLit(0)))
        free = ivl.Spec(checked.expr, free=True)
        variants = [
            _add_program(_increment()),
            _add_program(_increment(), modifies=[]),
            _add_program([*_increment(), ivl.Assume(ivl.TRUE)]),
            _add_program([*_increment(), ivl.Return()]),
            _add_program([ivl.Block("done", [*_increment(), ivl.Goto("done")])]),
            _add_program([ivl.While(ivl.FALSE, [], _increment())]),
            _add_program([ivl.While(ivl.FALSE, [], _increment(), label="done")]),
        ]
        for spec in (checked, free):
            program = _add_program(_increment())
            program.procedures[0].requires.append(spec)
            variants.append(program)
        texts = [print_boogie(program) for program in variants]
        self.assertEqual(len(set(texts)), len(variants))
        self.assertEqual(print_boogie(_add_program(_increment())), texts[0])


class WellFormedTests(TestCase):
    def test_accepts_small_program(self) -> None:
        self.assertEqual(well_formed(_add_program(_increment())), [])

    def test_assignment_outside_modifies(self) -> None:
        errors = well_formed(_add_program(_increment(), modifies=[]))
        self.assertEqual(len(errors), 1)
        self.assertIn("missing from modifies", str(errors[0]))
        self.assertEqual(errors[0].code, "IVL_ERROR")

    def test_sort_mismatch(self) -> None:
        body = [ivl.Assign("x", ivl.TRUE)]
        errors = well_formed(_add_program(body))
        self.assertEqual(len(errors), 1)
        self.assertIn("expected sort int, found bool", str(errors[0]))

    def test_old_in_body(self) -> None:
        body = [ivl.Assume(ivl.eq(ivl.Old(ivl.Var("x")), ivl.IntLit(0))), *_increment()]
        errors = well_formed(_add_program(body))
        self.assertEqual(len(errors), 1)
        self.assertIn("old() is not allowed here", str(errors[0]))

    def test_dangling_goto(self) -> None:
        body = [ivl.Block("done", [ivl.Goto("elsewhere")]), *_increment()]
        errors = well_formed(_add_program(body))
        self.assertEqual(len(errors), 1)
        self.assertIn("goto elsewhere", str(errors[0]))

    def test_duplicate_label(self) -> None:
        body = [ivl.Block("L", [ivl.Block("L", [])]), *_increment()]
        errors = well_formed(_add_program(body))
        self.assertTrue(any("label L declared twice" in str(e) for e in errors))

    def test_every_corpus_program_is_well_formed(self) -> None:
        for path in sorted((ROOT / "corpus").glob("*.le")):
            with self.subTest(example=path.stem):
                # compile_source raises on the first malformed node
                compile_source(path.read_text(encoding="utf-8"), file=str(path))


class StructureTests(TestCase):
    def test_goto_becomes_break_or_continue(self) -> None:
        loop = ivl.While(ivl.TRUE, [], [ivl.Goto("outer"), ivl.Goto("again")], label="again")
        structured = to_structured([ivl.Block("outer", [loop])])
        inner = structured[0].body[0].body
        self.assertEqual(inner, [ivl.Break("outer"), ivl.Continue("again")])

    def test_unresolved_goto(self) -> None:
        with self.assertRaises(WellFormednessError):
            to_structured([ivl.Goto("nowhere")])

    def test_skeleton_renames_labels(self) -> None:
        body = [ivl.Block("exit", [ivl.Havoc(("x",)), ivl.Goto("exit")]), ivl.Return()]
        self.assertEqual(skeleton(body), "block L1\n  havoc x\n  goto L1\nreturn\n")

    def test_rescue_loop_skeleton(self) -> None:
        source = (ROOT / "corpus" / "transmission.le").read_text(encoding="utf-8")
        program = compile_source(source)
        impl = next(i for i in program.implementations if i.name == "TRANSMITTER.attempt_transmission")
        expected = (FIXTURES / "transmission.skeleton").read_text(encoding="utf-8")
        self.assertEqual(skeleton(impl.body), expected)
