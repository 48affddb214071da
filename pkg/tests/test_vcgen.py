import sys
from importlib.util import find_spec
from pathlib import Path
from unittest import TestCase, skipUnless

from leverify.errors import SolverProtocolError, SolverUnavailable
from leverify.ivl import ast as ivl
from leverify.ivl.printer import format_expr
from leverify.pipeline import compile_source
from leverify.vcgen import (
    BUILTIN_Z3,
    INVALID,
    VALID,
    SolverClient,
    Z3Session,
    check,
    emit_smt,
    generate_vcs,
    passify,
)
from leverify.vcgen.instantiate import heap_axioms, instantiate
from leverify.vcgen.passify import EXIT_LABEL, PBlock, PBreak, PChoice
from leverify.vcgen.solver import parse_answer

HAS_Z3 = find_spec("z3") is not None
CORPUS = Path(__file__).resolve().parents[1] / "corpus"
UNCONSTRAINED_LOCAL = "class A\nfeature\n\tr\n\t\tlocal\n\t\t\tn: INTEGER\n\t\tdo\n\t\t\tcheck n = 1 end\n\t\tend\nend\n"


def _add_program(delta: int = 0) -> ivl.IvlProgram:
    x, n = ivl.Var("x"), ivl.Var("n")
    proc = ivl.Procedure(
        "P",
        [("n", ivl.INT)],
        modifies=["x"],
        ensures=[ivl.Spec(ivl.eq(x, ivl.BinOp("+", ivl.Old(x), n)))],
    )
    value = ivl.BinOp("+", x, n)
    if delta:
        value = ivl.BinOp("+", value, ivl.IntLit(delta))
    impl = ivl.Implementation("P", [("n", ivl.INT)], body=[ivl.Assign("x", value)])
    return ivl.IvlProgram(globals=[ivl.GlobalVar("x", ivl.INT)], procedures=[proc], implementations=[impl])


def _count_program() -> ivl.IvlProgram:
    i, n = ivl.Var("i"), ivl.Var("n")
    proc = ivl.Procedure(
        "Count",
        [("n", ivl.INT)],
        requires=[ivl.Spec(ivl.BinOp(">=", n, ivl.IntLit(0)))],
        ensures=[ivl.Spec(ivl.eq(ivl.Var("r"), n))],
        returns=[("r", ivl.INT)],
    )
    loop = ivl.While(
        ivl.BinOp("<", i, n),
        [ivl.LoopInvariant(ivl.BinOp("<=", i, n), obligation=ivl.Obligation(ivl.LOOP_INV_ENTRY, "i <= n"))],
        [ivl.Assign("i", ivl.BinOp("+", i, ivl.IntLit(1)))],
    )
    impl = ivl.Implementation(
        "Count",
        [("n", ivl.INT)],
        returns=[("r", ivl.INT)],
        locals=[("i", ivl.INT)],
        body=[ivl.Assign("i", ivl.IntLit(0)), loop, ivl.Assign("r", i)],
    )
    return ivl.IvlProgram(procedures=[proc], implementations=[impl])


class PassifyTests(TestCase):
    def test_incarnations(self) -> None:
        program = _add_program()
        passive = passify(program, program.implementations[0])
        self.assertEqual(len(passive.asserts), 1)
        self.assertEqual(passive.variables["x@0"], ivl.INT)
        self.assertEqual(passive.variables["x@1"], ivl.INT)
        self.assertIn("n@0", passive.variables)

    def test_loop_is_cut(self) -> None:
        program = _count_program()
        passive = passify(program, program.implementations[0])
        kinds = [check.obligation.kind for check in passive.asserts]
        self.assertEqual(kinds, [ivl.LOOP_INV_ENTRY, ivl.LOOP_INV_INDUCTIVE, ivl.POSTCONDITION])


class VcTests(TestCase):
    def test_one_vc_per_assertion(self) -> None:
        vcs = generate_vcs(_count_program())
        self.assertEqual(
            [vc.id for vc in vcs],
            ["Count.loop-invariant-entry.1", "Count.loop-invariant-inductive.1", "Count.postcondition.1"],
        )
        self.assertEqual(vcs[0].filename, "Count.loop-invariant-entry.1.smt2")

    def test_smt_script(self) -> None:
        (vc,) = generate_vcs(_add_program())
        script = emit_smt(vc)
        self.assertTrue(script.startswith("; P.postcondition.1\n"))
        self.assertIn("(set-logic ALL)", script)
        self.assertIn("(declare-const x@0 Int)", script)
        self.assertIn("(assert (not ", script)
        self.assertTrue(script.endswith("(check-sat)\n"))

    def test_description_stays_on_one_line(self) -> None:
        (vc,) = generate_vcs(_add_program())
        vc.description = "ensure x =\n  old x + n"
        self.assertEqual(emit_smt(vc).splitlines()[1], "; ensure x = old x + n")


def _branch_program(ensures: ivl.Expr, *, jumps: bool) -> ivl.IvlProgram:
    """``x`` grows by ``n`` when ``n`` is positive and shrinks by ``n`` otherwise."""
    x, n = ivl.Var("x"), ivl.Var("n")
    grow = ivl.Assign("x", ivl.BinOp("+", x, n))
    shrink = ivl.Assign("x", ivl.BinOp("-", x, n))
    positive = ivl.BinOp(">", n, ivl.IntLit(0))
    if jumps:
        body = [ivl.Block("done", [ivl.If(positive, [grow, ivl.Goto("done")]), shrink])]
    else:
        body = [ivl.If(positive, [grow], [shrink])]
    proc = ivl.Procedure("B", [("n", ivl.INT)], modifies=["x"], ensures=[ivl.Spec(ensures)])
    impl = ivl.Implementation("B", [("n", ivl.INT)], body=body)
    return ivl.IvlProgram(globals=[ivl.GlobalVar("x", ivl.INT)], procedures=[proc], implementations=[impl])


def _early_return_program(ensures: ivl.Expr, *, jumps: bool) -> ivl.IvlProgram:
    x, n = ivl.Var("x"), ivl.Var("n")
    small = ivl.BinOp("<", n, ivl.IntLit(10))
    clamp = ivl.Assign("x", ivl.IntLit(10))
    copy = ivl.Assign("x", n)
    if jumps:
        body = [ivl.If(ivl.not_(small), [clamp, ivl.Return()]), copy]
    else:
        body = [ivl.If(small, [copy], [clamp])]
    proc = ivl.Procedure("R", [("n", ivl.INT)], modifies=["x"], ensures=[ivl.Spec(ensures)])
    impl = ivl.Implementation("R", [("n", ivl.INT)], body=body)
    return ivl.IvlProgram(globals=[ivl.GlobalVar("x", ivl.INT)], procedures=[proc], implementations=[impl])


def _break_labels(stmts: list) -> set[str]:
    labels = set()
    for stmt in stmts:
        if isinstance(stmt, PBreak):
            labels.add(stmt.label)
        elif isinstance(stmt, PBlock):
            labels |= _break_labels(stmt.body)
        elif isinstance(stmt, PChoice):
            for branch in stmt.branches:
                labels |= _break_labels(branch)
    return labels


class JumpPassificationTests(TestCase):
    def test_jumps_become_labeled_breaks(self) -> None:
        x = ivl.Var("x")
        for jumps, expected in [(True, {"done"}), (False, set())]:
            program = _branch_program(ivl.BinOp(">=", x, ivl.Old(x)), jumps=jumps)
            passive = passify(program, program.implementations[0])
            self.assertEqual(_break_labels(passive.body) - {EXIT_LABEL}, expected)
            self.assertEqual(len(passive.asserts), 1)

    @skipUnless(HAS_Z3, "z3-solver not installed")
    def test_jumps_and_branches_verify_alike(self) -> None:
        x, n = ivl.Var("x"), ivl.Var("n")
        old_x = ivl.Old(x)
        cases = [
            (_branch_program, ivl.BinOp(">=", x, old_x), VALID),
            (_branch_program, ivl.eq(x, ivl.BinOp("+", old_x, n)), INVALID),
            (_branch_program, ivl.BinOp(">", x, old_x), INVALID),
            (_early_return_program, ivl.BinOp("<=", x, ivl.IntLit(10)), VALID),
            (_early_return_program, ivl.eq(x, n), INVALID),
        ]
        solver = SolverClient(BUILTIN_Z3, 10)
        for build, ensures, expected in cases:
            with self.subTest(program=build.__name__, ensures=format_expr(ensures)):
                verdicts = []
                for jumps in (True, False):
                    (vc,) = generate_vcs(build(ensures, jumps=jumps))
                    verdicts.append(check(vc, solver).status)
                self.assertEqual(verdicts, [expected, expected])



def _heap_axiom() -> ivl.Axiom:
    heap, ref, n = ivl.Var("h"), ivl.Var("r"), ivl.Var("n")
    body = ivl.implies(
        ivl.FunApp("post.A.r", (heap, ref)),
        ivl.BinOp(">=", ivl.FunApp("size", (heap, ref)), n),
    )
    return ivl.Axiom(
        ivl.Quant("forall", (("h", ivl.HEAP), ("r", ivl.REF), ("n", ivl.INT)), body), "post.A.r in A"
    )


class InstantiationTests(TestCase):
    def test_trigger_is_the_defined_symbol(self) -> None:
        (heap_axiom,) = heap_axioms(ivl.IvlProgram(axioms=[_heap_axiom()]))
        self.assertEqual(heap_axiom.trigger.name, "post.A.r")

    def test_uncovered_variables_stay_quantified(self) -> None:
        (heap_axiom,) = heap_axioms(ivl.IvlProgram(axioms=[_heap_axiom()]))
        app = ivl.FunApp("post.A.r", (ivl.Var("Heap@1"), ivl.Var("c")))
        ((comment, fact),) = instantiate([heap_axiom], [ivl.implies(app, ivl.TRUE)])
        self.assertEqual(comment, "post.A.r in A")
        self.assertIsInstance(fact, ivl.Quant)
        self.assertEqual(fact.bound, (("n", ivl.INT),))
        self.assertTrue(ivl.mentions(fact.body, "Heap@1"))
        self.assertFalse(ivl.mentions(fact.body, "h"))

    def test_applications_under_quantifiers_are_not_ground(self) -> None:
        (heap_axiom,) = heap_axioms(ivl.IvlProgram(axioms=[_heap_axiom()]))
        hidden = ivl.Quant("forall", (("c", ivl.REF),), ivl.FunApp("post.A.r", (ivl.Var("Heap"), ivl.Var("c"))))
        self.assertEqual(instantiate([heap_axiom], [hidden]), [])

    def test_axiom_without_trigger_is_rejected(self) -> None:
        body = ivl.eq(ivl.MapSelect(ivl.Var("h"), ivl.Var("r"), ivl.Var("f")), ivl.Var("v"))
        quant = ivl.Quant("forall", (("h", ivl.HEAP), ("r", ivl.REF), ("f", ivl.FIELD), ("v", ivl.VALUE)), body)
        with self.assertRaises(ValueError):
            heap_axioms(ivl.IvlProgram(axioms=[ivl.Axiom(quant)]))

    def test_translated_script_has_no_heap_quantifiers(self) -> None:
        program = compile_source((CORPUS / "cell.le").read_text(encoding="utf-8"), file="cell.le")
        vc = next(vc for vc in generate_vcs(program) if vc.procedure == "CELL_CLIENT.check_cell")
        script = emit_smt(vc)
        asserts = [line for line in script.splitlines() if line.startswith("(assert")]
        self.assertFalse(any("(Array" in line for line in asserts))
        self.assertIn("(declare-datatypes ((Value 0))", script)
        self.assertNotIn("(declare-fun $int2val", script)
        self.assertIn("; post.CELL.set in RECELL", script)

    @skipUnless(HAS_Z3, "z3-solver not installed")
    def test_false_assertion_is_invalid(self) -> None:
        impl = ivl.Implementation(
            "F", [], body=[ivl.Assert(ivl.eq(ivl.IntLit(0), ivl.IntLit(1)), ivl.Obligation(ivl.ASSERT, "0 = 1"))]
        )
        program = ivl.IvlProgram(procedures=[ivl.Procedure("F", [])], implementations=[impl])
        (vc,) = generate_vcs(program)
        self.assertEqual(check(vc, SolverClient(BUILTIN_Z3, 10)).status, INVALID)

    @skipUnless(HAS_Z3, "z3-solver not installed")
    def test_unconstrained_local_check_is_invalid(self) -> None:
        program = compile_source(UNCONSTRAINED_LOCAL, file="local.le")
        solver = SolverClient(BUILTIN_Z3, 10)
        verdicts = {vc.kind: check(vc, solver).status for vc in generate_vcs(program) if vc.procedure == "A.r"}
        self.assertEqual(verdicts[ivl.ASSERT], INVALID)


class SolverClientTests(TestCase):
    def test_parse_answer(self) -> None:
        self.assertEqual(parse_answer("unsat\n"), ("unsat", ""))
        self.assertEqual(parse_answer("sat\n(model\n  (x 1))\n"), ("sat", "(model\n(x 1))"))
        with self.assertRaises(SolverProtocolError):
            parse_answer("gibberish\n")

    def test_argv_template(self) -> None:
        client = SolverClient("{python} -m leverify.vcgen.z3_adapter --timeout {timeout}", 2.5)
        self.assertEqual(client.argv(), [sys.executable, "-m", "leverify.vcgen.z3_adapter", "--timeout", "2.5"])

    def test_verdict_from_external_command(self) -> None:
        (vc,) = generate_vcs(_add_program())
        self.assertEqual(check(vc, SolverClient("echo unsat")).status, VALID)
        self.assertEqual(check(vc, SolverClient("echo sat")).status, INVALID)

    def test_gibberish_is_a_protocol_error(self) -> None:
        with self.assertRaises(SolverProtocolError) as ctx:
            SolverClient("echo gibberish").run("(check-sat)\n")
        self.assertEqual(ctx.exception.code, "SOLVER_PROTOCOL")

    def test_missing_binary(self) -> None:
        with self.assertRaises(SolverUnavailable) as ctx:
            SolverClient("/nonexistent/leverify-solver").run("(check-sat)\n")
        self.assertEqual(ctx.exception.code, "SOLVER_UNAVAILABLE")

    def test_silent_failure_is_unavailable(self) -> None:
        with self.assertRaises(SolverUnavailable):
            SolverClient("false").run("(check-sat)\n")


@skipUnless(HAS_Z3, "z3-solver not installed")
class Z3Tests(TestCase):
    def test_session_answers(self) -> None:
        session = Z3Session(5)
        self.assertEqual(session.run("(declare-const a Int)(assert (> a a))(check-sat)")[0], "unsat")
        answer, model = session.run("(declare-const a Int)(assert (> a 3))(check-sat)")
        self.assertEqual(answer, "sat")
        self.assertIn("a", model)

    def test_rejected_script(self) -> None:
        with self.assertRaises(SolverProtocolError):
            Z3Session(5).run("(assert undeclared)(check-sat)")

    def test_correct_and_buggy_programs(self) -> None:
        solver = SolverClient(BUILTIN_Z3, 10)
        self.assertTrue(all(check(vc, solver).valid for vc in generate_vcs(_add_program())))
        self.assertTrue(all(check(vc, solver).valid for vc in generate_vcs(_count_program())))
        (vc,) = generate_vcs(_add_program(delta=1))
        self.assertEqual(check(vc, solver).status, INVALID)
