from pathlib import Path
from unittest import TestCase

from leverify.errors import (
    FrameReceiverUnsupported,
    FrameWidened,
    MissingRescueInvariant,
    PurityError,
    PurityFailed,
)
from leverify.frontend import parse, typecheck
from leverify.ivl import ast as ivl
from leverify.ivl.printer import format_expr
from leverify.translate import (
    DYNAMIC,
    STATIC_ONLY,
    FrameSpec,
    build_context,
    check_purity,
    generate_inheritance_axioms,
    infer_frame,
    translate_program,
)

CORPUS = Path(__file__).resolve().parents[1] / "corpus"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

TRANSFER = """
class ACCOUNT
feature
	balance: INTEGER

	deposit (amount: INTEGER)
		do
			balance := balance + amount
		ensure
			balance = old balance + amount
		end

	transfer (other: ACCOUNT; amount: INTEGER)
		require
			other /= Void
			other /= Current
		modify balance, other.balance
		do
			balance := balance - amount
			other.deposit (amount)
		end
end

class SAVINGS
inherit ACCOUNT
	redefine transfer end
feature
	transfer (target: ACCOUNT; amount: INTEGER)
		do
			balance := balance - amount
			target.deposit (amount)
		end
end
"""

CHAIN = """
class A
feature
	x: INTEGER
	r
		do
			x := 5
		ensure
			x >= 0
		end
end

class B
inherit A
	redefine r end
feature
	r
		do
			x := 5
		ensure then
			x >= 1
		end
end

class C
inherit B
	redefine r end
feature
	r
		do
			x := 5
		ensure then
			x >= 2
		end
end
"""


def _typed(name_or_source: str):
    path = CORPUS / name_or_source
    if path.suffix == ".le" and path.exists():
        return typecheck(parse(path.read_text(encoding="utf-8"), str(path)))
    return typecheck(parse(name_or_source))


def _procedure(program: ivl.IvlProgram, name: str) -> ivl.Procedure:
    return next(proc for proc in program.procedures if proc.name == name)


def _mentions_field(specs: list[ivl.Spec], field_const: str) -> bool:
    return any(ivl.mentions(spec.expr, field_const) for spec in specs)


class InheritanceAxiomTests(TestCase):
    def setUp(self) -> None:
        self.typed = _typed("sequence.le")

    def test_one_axiom_pair_per_descendant(self) -> None:
        ctx = build_context(self.typed, DYNAMIC)
        forth = self.typed.classes["SEQUENCE"].routine("forth")
        axioms = generate_inheritance_axioms(ctx, "SEQUENCE", forth)
        comments = [axiom.comment for axiom in axioms]
        descendants = [
            "SEQUENCE",
            "MONOTONE_SEQUENCE",
            "STRICT_SEQUENCE",
            "ARITHMETIC_SEQUENCE",
            "FIBONACCI_SEQUENCE",
        ]
        self.assertEqual(
            comments,
            [f"post.SEQUENCE.forth in {name}" for name in descendants]
            + [f"pre.SEQUENCE.forth in {name}" for name in descendants],
        )
        for axiom in axioms:
            self.assertIsInstance(axiom.expr, ivl.Quant)
            self.assertEqual(axiom.expr.kind, "forall")

    def test_descendant_clauses_reach_the_axiom(self) -> None:
        ctx = build_context(self.typed, DYNAMIC)
        forth = self.typed.classes["STRICT_SEQUENCE"].routine("forth")
        axioms = generate_inheritance_axioms(ctx, "STRICT_SEQUENCE", forth)
        by_comment = {axiom.comment: axiom.expr for axiom in axioms}
        self.assertEqual(len(axioms), 4)
        step = "ARITHMETIC_SEQUENCE.step"
        self.assertTrue(ivl.mentions(by_comment["post.STRICT_SEQUENCE.forth in ARITHMETIC_SEQUENCE"], step))
        self.assertFalse(ivl.mentions(by_comment["post.STRICT_SEQUENCE.forth in STRICT_SEQUENCE"], step))

    def test_three_level_redefinition_chain(self) -> None:
        typed = _typed(CHAIN)
        ctx = build_context(typed, DYNAMIC)
        for owner, covered in [("A", ["A", "B", "C"]), ("B", ["B", "C"]), ("C", ["C"])]:
            with self.subTest(owner=owner):
                routine = typed.classes[owner].routine("r")
                axioms = generate_inheritance_axioms(ctx, owner, routine)
                posts = [a for a in axioms if a.comment.startswith(f"post.{owner}.r ")]
                self.assertEqual(len(posts), len(covered))
                guards = []
                for axiom in posts:
                    receiver = ivl.Var(axiom.expr.bound[2][0])
                    guard, rest = axiom.expr.body.left, axiom.expr.body.right
                    self.assertEqual(guard.left, ivl.type_of(receiver))
                    self.assertEqual(guard.op, "<:")
                    guards.append(guard)
                    level = covered.index(guard.right.name) + 3 - len(covered)
                    text = format_expr(rest.right)
                    for bound in range(3):
                        self.assertEqual(f">= {bound}" in text, bound <= level, (axiom.comment, text))
                self.assertEqual([g.right.name for g in guards], covered)
                self.assertEqual(len(set(guards)), len(covered))

    def test_static_only_has_no_axioms_or_predicates(self) -> None:
        ctx = build_context(self.typed, STATIC_ONLY)
        forth = self.typed.classes["SEQUENCE"].routine("forth")
        self.assertEqual(generate_inheritance_axioms(ctx, "SEQUENCE", forth), [])
        program = translate_program(self.typed, STATIC_ONLY)
        names = {decl.name for decl in program.functions}
        self.assertNotIn("post.SEQUENCE.forth", names)
        self.assertNotIn("pre.SEQUENCE.forth", names)

    def test_dynamic_declares_predicates(self) -> None:
        program = translate_program(self.typed, DYNAMIC)
        names = {decl.name for decl in program.functions}
        self.assertIn("post.ARITHMETIC_SEQUENCE.forth", names)
        self.assertIn("pre.SEQUENCE.forth", names)

    def test_unknown_mode(self) -> None:
        with self.assertRaises(ValueError):
            build_context(self.typed, "sideways")

    def test_ensure_then_reads_the_post_heap(self) -> None:
        typed = _typed("expression.le")
        ctx = build_context(typed, DYNAMIC)
        axioms = generate_inheritance_axioms(ctx, "EXP", typed.classes["EXP"].routine("eval"))
        plus = format_expr(next(a.expr for a in axioms if a.comment == "post.EXP.eval in PLUS"))
        self.assertIn("PLUS.left", plus)
        self.assertIn("h1[", plus)
        self.assertNotIn("h2[", plus)
        const = next(a.expr for a in axioms if a.comment == "post.EXP.eval in CONST")
        self.assertTrue(ivl.mentions(const, "CONST.value"))
        self.assertFalse(ivl.mentions(const, "PLUS.left"))


class FrameTests(TestCase):
    def test_inferred_from_postcondition(self) -> None:
        typed = _typed("transmission.le")
        frame = infer_frame(typed, "TRANSMITTER", "note_delivery")
        self.assertEqual(frame, FrameSpec(frozenset({("Current", "TRANSMITTER.log_size")}), inferred=True))

    def test_explicit_modify_clause(self) -> None:
        typed = _typed("transmission.le")
        frame = infer_frame(typed, "TRANSMITTER", "attempt_transmission")
        self.assertFalse(frame.inferred)
        self.assertEqual(
            frame.sorted_pairs(),
            [
                ("Current", "TRANSMITTER.failed"),
                ("Current", "TRANSMITTER.failures"),
                ("Current", "TRANSMITTER.transmitted"),
            ],
        )

    def test_inherited_modify_clause(self) -> None:
        typed = _typed("sequence.le")
        frame = infer_frame(typed, "ARITHMETIC_SEQUENCE", "forth")
        self.assertEqual(
            frame.sorted_pairs(),
            [("Current", "SEQUENCE.index"), ("Current", "SEQUENCE.value")],
        )

    def test_unsupported_receiver(self) -> None:
        source = """
class ITEM
feature
	count: INTEGER
	clear
		do
			count := 0
		ensure
			count = 0
		end
end

class BOX
feature
	item: ITEM
	reset
		do
			item.clear
		ensure
			item.count = 0
		end
end
"""
        typed = _typed(source)
        with self.assertRaises(FrameReceiverUnsupported) as ctx:
            infer_frame(typed, "BOX", "reset")
        self.assertEqual(ctx.exception.code, "FRAME_ERROR")

    def test_frame_postcondition_is_checked(self) -> None:
        program = translate_program(_typed("transmission.le"))
        proc = _procedure(program, "TRANSMITTER.note_delivery")
        frames = [spec for spec in proc.ensures if spec.obligation and spec.obligation.kind == ivl.FRAME]
        self.assertEqual(len(frames), 1)
        self.assertFalse(frames[0].free)
        self.assertIsInstance(frames[0].expr, ivl.Quant)

    def test_redefinition_attributes_join_the_lines_frames(self) -> None:
        typed = _typed("sequence.le")
        previous = ("Current", "FIBONACCI_SEQUENCE.previous")
        for cls in ("SEQUENCE", "MONOTONE_SEQUENCE", "FIBONACCI_SEQUENCE"):
            with self.subTest(cls=cls):
                frame = infer_frame(typed, cls, "forth")
                self.assertIn(previous, frame.mod_set)
                self.assertFalse(frame.inferred)
        for cls in ("STRICT_SEQUENCE", "ARITHMETIC_SEQUENCE"):
            with self.subTest(cls=cls):
                self.assertNotIn(previous, infer_frame(typed, cls, "forth").mod_set)

    def test_descendant_attribute_reaches_the_original(self) -> None:
        typed = _typed(str(FIXTURES / "frame_extension.le"))
        for cls in ("A", "B"):
            with self.subTest(cls=cls):
                self.assertEqual(
                    infer_frame(typed, cls, "r").sorted_pairs(),
                    [("Current", "A.x"), ("Current", "B.y")],
                )

    def test_widening_redefinition_is_rejected(self) -> None:
        source = (FIXTURES / "frame_extension.le").read_text(encoding="utf-8")
        # y moved up into A, where the original r does not list it
        source = source.replace("\tx: INTEGER\n", "\tx: INTEGER\n\ty: INTEGER\n", 1)
        source = source.replace("feature\n\ty: INTEGER\n\n\tmake\n\t\tmodify", "feature\n\tmake\n\t\tmodify")
        typed = _typed(source)
        with self.assertRaises(FrameWidened) as ctx:
            infer_frame(typed, "A", "r")
        self.assertEqual(ctx.exception.code, "FRAME_ERROR")
        self.assertEqual(ctx.exception.entry, "y")
        with self.assertRaises(FrameWidened):
            translate_program(typed)

    def test_formal_attribute_entries(self) -> None:
        typed = _typed(TRANSFER)
        frame = infer_frame(typed, "ACCOUNT", "transfer")
        self.assertEqual(frame.sorted_pairs(), [("Current", "ACCOUNT.balance"), ("other", "ACCOUNT.balance")])
        savings = infer_frame(typed, "SAVINGS", "transfer")
        self.assertEqual(savings.sorted_pairs(), [("Current", "ACCOUNT.balance"), ("target", "ACCOUNT.balance")])
        proc = _procedure(translate_program(typed), "SAVINGS.transfer")
        frames = [spec for spec in proc.ensures if spec.obligation and spec.obligation.kind == ivl.FRAME]
        self.assertTrue(ivl.mentions(frames[0].expr, "target"))


class PurityTests(TestCase):
    def test_contract_call_must_not_write(self) -> None:
        source = """
class A
feature
	x: INTEGER
	peek: INTEGER
		do
			x := x + 1
			Result := x
		end
	run
		do
			x := 1
		ensure
			peek > 0
		end
end
"""
        with self.assertRaises(PurityFailed) as ctx:
            check_purity(_typed(source))
        (error,) = ctx.exception.errors
        self.assertIsInstance(error, PurityError)
        self.assertEqual(error.routine, "A.peek")
        self.assertIn("assigns attribute x", str(error))

    def test_every_impure_routine_is_reported(self) -> None:
        source = """
class A
feature
	x: INTEGER
	y: INTEGER
	peek: INTEGER
		do
			x := x + 1
			y := 2
			Result := x
		end
	poke: INTEGER
		pure
		do
			y := 3
			Result := y
		end
	run
		do
			x := 1
		ensure
			peek > 0
		end
end
"""
        with self.assertRaises(PurityFailed) as ctx:
            check_purity(_typed(source))
        found = [(e.routine, e.offending) for e in ctx.exception.errors]
        self.assertEqual(
            found,
            [("A.peek", "assigns attribute x"), ("A.peek", "assigns attribute y"), ("A.poke", "assigns attribute y")],
        )
        self.assertEqual(ctx.exception.code, "PURITY_ERROR")

    def test_pure_routine_keeps_heap(self) -> None:
        typed = _typed("counter.le")
        self.assertTrue(check_purity(typed).is_pure("COUNTER", "is_zero"))
        program = translate_program(typed)
        proc = _procedure(program, "COUNTER.is_zero")
        heap = ivl.Var(ivl.HEAP_VAR)
        unchanged = [spec for spec in proc.ensures if spec.expr == ivl.eq(heap, ivl.Old(heap))]
        self.assertEqual(len(unchanged), 1)
        self.assertFalse(unchanged[0].free)
        self.assertIn("fun.COUNTER.is_zero", {decl.name for decl in program.functions})

    def test_redefinition_of_pure_routine_is_pure(self) -> None:
        typed = _typed("cell.le")
        table = check_purity(typed)
        self.assertTrue(table.is_pure("CELL", "get"))


class RoutineTranslationTests(TestCase):
    def test_missing_rescue_invariant(self) -> None:
        source = """
class A
feature
	tries: INTEGER
	run
		do
			tries := tries + 1
		rescue
			Retry := tries < 3
		end
end
"""
        with self.assertRaises(MissingRescueInvariant) as ctx:
            translate_program(_typed(source))
        self.assertEqual(ctx.exception.routine, "A.run")

    def test_invariant_is_not_assumed_by_creators(self) -> None:
        program = translate_program(_typed("counter.le"))
        make = _procedure(program, "COUNTER.make")
        increment = _procedure(program, "COUNTER.increment")
        free_make = [spec for spec in make.requires if spec.free]
        free_increment = [spec for spec in increment.requires if spec.free]
        self.assertFalse(_mentions_field(free_make, "COUNTER.count"))
        self.assertTrue(_mentions_field(free_increment, "COUNTER.count"))

    def test_invariant_checked_on_normal_exit(self) -> None:
        program = translate_program(_typed("counter.le"))
        proc = _procedure(program, "COUNTER.decrement")
        checks = [s for s in proc.ensures if s.obligation and s.obligation.kind == ivl.CLASS_INV_EXIT]
        self.assertEqual(len(checks), 1)
        expr = checks[0].expr
        self.assertEqual(expr.op, "==>")
        self.assertEqual(expr.left, ivl.not_(ivl.Var(ivl.EXCV_VAR)))

    def test_inherited_routine_keeps_descendant_invariants(self) -> None:
        program = translate_program(_typed(str(FIXTURES / "inherited_invariant.le")))
        bump = _procedure(program, "A.bump")
        checks = [s for s in bump.ensures if s.obligation and s.obligation.kind == ivl.CLASS_INV_EXIT]
        self.assertEqual([s.obligation.description for s in checks], ["invariant x = 0 of B"])
        self.assertFalse(checks[0].free)
        in_b = ivl.subtype(ivl.type_of(ivl.Var(ivl.CURRENT)), ivl.Var("B"))
        self.assertEqual(checks[0].expr.left, ivl.and_(ivl.not_(ivl.Var(ivl.EXCV_VAR)), in_b))
        assumed = [s for s in bump.requires if s.free and isinstance(s.expr, ivl.BinOp) and s.expr.left == in_b]
        self.assertEqual(len(assumed), 1)
        # B redefines make, so A.make owes B nothing
        make = _procedure(program, "A.make")
        self.assertFalse(any(s.obligation and s.obligation.kind == ivl.CLASS_INV_EXIT for s in make.ensures))

    def test_postcondition_without_excv_binds_on_normal_exit(self) -> None:
        program = translate_program(_typed("transmission.le"))
        excv = ivl.Var(ivl.EXCV_VAR)
        note = _procedure(program, "TRANSMITTER.note_delivery")
        posts = [s for s in note.ensures if s.obligation and s.obligation.kind == ivl.POSTCONDITION]
        self.assertEqual(len(posts), 1)
        self.assertEqual(posts[0].expr.op, "==>")
        self.assertEqual(posts[0].expr.left, ivl.not_(excv))

        attempt = _procedure(program, "TRANSMITTER.attempt_transmission")
        posts = [s for s in attempt.ensures if s.obligation and s.obligation.kind == ivl.POSTCONDITION]
        self.assertEqual(len(posts), 2)
        self.assertEqual(posts[0].expr.left, excv)

    def test_rescue_loop_invariants(self) -> None:
        program = translate_program(_typed("transmission.le"))
        impl = next(i for i in program.implementations if i.name == "TRANSMITTER.attempt_transmission")
        self.assertIn((ivl.RETRY_VAR, ivl.BOOL), impl.locals)
        loops = [s for s in ivl.walk_stmts(impl.body) if isinstance(s, ivl.While)]
        self.assertEqual(len(loops), 1)
        checked = [inv for inv in loops[0].invariants if not inv.free]
        self.assertEqual(len(checked), 3)
        self.assertEqual(loops[0].cond, ivl.Var(ivl.EXCV_VAR))
