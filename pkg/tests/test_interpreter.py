from pathlib import Path
from unittest import TestCase

from leverify.frontend import parse, typecheck
from leverify.interpreter import (
    ASSERTION,
    FRAME,
    INVARIANT,
    POSTCONDITION,
    RESCUE_INVARIANT,
    Interpreter,
    explore_program,
    fault_stubs,
)

CORPUS = Path(__file__).resolve().parents[1] / "corpus"
FIXTURES = Path(__file__).resolve().parent / "fixtures"

# attempt_transmission whose rescue gives up without recording the failure
GIVES_UP_SILENTLY = """
class TRANSMITTER
feature
	max_attempts: INTEGER
	failures: INTEGER
	failed: BOOLEAN
	transmitted: BOOLEAN
	channel_ready: BOOLEAN

	attempt_transmission
		modify failed, failures, transmitted
		do
			failed := False
			unsafe_transmit
		ensure
			ExcV implies failed
			not ExcV implies not failed
		rescue invariant
			not ExcV implies not failed
		rescue
			failures := failures + 1
			if failures < max_attempts then
				Retry := True
			end
		end

	unsafe_transmit
		modify transmitted
		do
			if channel_ready then
				transmitted := True
			else
				transmitted := False
				raise
			end
		ensure
			ExcV implies not transmitted
			not ExcV implies transmitted
		end
end
"""

LOOSE_RESCUE_INVARIANT = GIVES_UP_SILENTLY.replace(
    "\t\t\tnot ExcV implies not failed\n\t\trescue\n",
    "\t\t\tnot ExcV implies not failed\n\t\t\tfailures < max_attempts\n\t\trescue\n",
)

BUMP = """
class BOX
feature
	n: INTEGER
	bump
		modify n
		do
			n := n + 1
			check n > 1 end
		end
end
"""

# arguments start at every value of v, including ones breaking CELL's invariant
CELL_USER = """
class CELL
feature
	v: INTEGER
	touch
		modify v
		do
			v := v
		end
invariant
	v > 0
end

class USER
feature
	use (c: CELL)
		require
			c /= Void
		do
			c.touch
		end
end
"""


def _load(name: str):
    path = CORPUS / name
    return typecheck(parse(path.read_text(encoding="utf-8"), str(path)))


def _kinds(exploration) -> set[str]:
    return {violation.kind for violation in exploration.violations}


class FaultStubTests(TestCase):
    def test_raising_routines_without_rescue(self) -> None:
        self.assertEqual(fault_stubs(_load("transmission.le")), {("TRANSMITTER", "unsafe_transmit")})
        self.assertEqual(fault_stubs(_load("retry_counter.le")), {("DOWNLOADER", "fetch")})
        self.assertEqual(fault_stubs(_load("counter.le")), set())


class TransmissionTests(TestCase):
    overrides = {"max_attempts": [2], "failures": range(3)}

    def test_retry_loop_keeps_its_contract(self) -> None:
        interpreter = Interpreter(_load("transmission.le"))
        result = interpreter.explore("TRANSMITTER", "attempt_transmission", overrides=self.overrides)
        self.assertTrue(result.ok, [str(v) for v in result.violations])
        self.assertGreater(result.states, 0)
        # by-contract stub fans out into a success and a failure outcome
        self.assertGreater(result.runs, result.states)
        self.assertFalse(result.truncated)

    def test_silent_give_up_breaks_the_postcondition(self) -> None:
        interpreter = Interpreter(typecheck(parse(GIVES_UP_SILENTLY)))
        result = interpreter.explore("TRANSMITTER", "attempt_transmission", overrides=self.overrides)
        self.assertFalse(result.ok)
        (violation,) = result.violations
        self.assertEqual(violation.kind, POSTCONDITION)
        self.assertEqual(violation.routine, "TRANSMITTER.attempt_transmission")
        self.assertEqual(violation.description, "ExcV implies failed")

    def test_rescue_invariant_checked_after_each_attempt(self) -> None:
        interpreter = Interpreter(typecheck(parse(LOOSE_RESCUE_INVARIANT)))
        result = interpreter.explore("TRANSMITTER", "attempt_transmission", overrides=self.overrides)
        self.assertIn(RESCUE_INVARIANT, _kinds(result))

    def test_whole_routine_by_contract(self) -> None:
        typed = _load("transmission.le")
        stubs = fault_stubs(typed) | {("TRANSMITTER", "attempt_transmission")}
        interpreter = Interpreter(typed, by_contract=stubs)
        result = interpreter.explore("TRANSMITTER", "send_and_log", overrides=self.overrides)
        self.assertTrue(result.ok, [str(v) for v in result.violations])

    def test_frame_violation(self) -> None:
        interpreter = Interpreter(_load("mutants/transmission_frame.le"))
        result = interpreter.explore("TRANSMITTER", "note_delivery")
        self.assertEqual(_kinds(result), {FRAME})
        self.assertIn("TRANSMITTER.failures", result.violations[0].description)


class ViolationTests(TestCase):
    def test_failed_check(self) -> None:
        result = Interpreter(typecheck(parse(BUMP))).explore("BOX", "bump")
        self.assertEqual(result.states, 4)
        self.assertEqual(_kinds(result), {ASSERTION})
        self.assertEqual(result.violations[0].description, "n > 1")

    def test_broken_class_invariant(self) -> None:
        interpreter = Interpreter(_load("mutants/account_withdraw_pre.le"))
        result = interpreter.explore("ACCOUNT", "withdraw")
        self.assertIn(INVARIANT, _kinds(result))

    def test_entry_states_respect_invariant_and_precondition(self) -> None:
        interpreter = Interpreter(_load("counter.le"))
        result = interpreter.explore("COUNTER", "decrement")
        # count ranges over 0..3 and decrement needs count > 0
        self.assertEqual(result.states, 3)
        self.assertTrue(result.ok)

    def test_argument_objects_start_consistent(self) -> None:
        result = Interpreter(typecheck(parse(CELL_USER))).explore("USER", "use")
        # Void fails the precondition and v = 0 breaks the invariant
        self.assertEqual(result.states, 3)
        self.assertTrue(result.ok)

    def test_state_cap(self) -> None:
        interpreter = Interpreter(_load("transmission.le"))
        result = interpreter.explore("TRANSMITTER", "note_delivery", max_states=5)
        self.assertTrue(result.truncated)
        self.assertEqual(result.states, 5)

    def test_unknown_routine(self) -> None:
        with self.assertRaises(KeyError):
            Interpreter(_load("counter.le")).explore("COUNTER", "reset")


class CorpusOracleTests(TestCase):
    def test_corpus_runs_without_violations(self) -> None:
        for path in sorted(CORPUS.glob("*.le")):
            with self.subTest(example=path.stem):
                typed = typecheck(parse(path.read_text(encoding="utf-8"), str(path)))
                for result in explore_program(typed, max_states=512):
                    self.assertTrue(result.ok, [str(v) for v in result.violations])

    def test_client_routines_run_to_completion(self) -> None:
        typed = _load("account.le")
        result = Interpreter(typed).explore("BANK_CLIENT", "run")
        self.assertEqual(result.states, 1)
        self.assertEqual(result.runs, 1)
        self.assertTrue(result.ok)


class ExpressionTreeTests(TestCase):
    def test_plus_over_two_constants(self) -> None:
        interpreter = Interpreter(_load("expression.le"))
        heap, plus = interpreter.allocate({}, "PLUS")
        heap, left = interpreter.allocate(heap, "CONST")
        heap, right = interpreter.allocate(heap, "CONST")
        heap[plus].update(left=left, right=right)
        heap[left].update(value=2, last_value=2)
        heap[right].update(value=3, last_value=3)
        outcomes = list(interpreter.invoke(plus, "eval", [], heap))
        self.assertEqual(len(outcomes), 1)
        after, raised, _ = outcomes[0]
        self.assertFalse(raised)
        self.assertEqual(after[plus]["last_value"], 5)
        self.assertEqual(after[left], heap[left])
        self.assertEqual(interpreter.violations, [])

    def test_root_main(self) -> None:
        result = Interpreter(_load("expression.le")).explore("ROOT", "main")
        self.assertEqual((result.states, result.runs), (1, 1))
        self.assertTrue(result.ok)


class InheritanceTests(TestCase):
    def load(self, name: str):
        path = FIXTURES / name
        return typecheck(parse(path.read_text(encoding="utf-8"), str(path)))

    def test_inherited_routine_is_held_to_the_dynamic_invariant(self) -> None:
        result = Interpreter(self.load("inherited_invariant.le")).explore("ROOT", "main")
        self.assertEqual(_kinds(result), {INVARIANT})
        (violation,) = result.violations
        self.assertEqual(violation.routine, "A.bump")
        self.assertEqual(violation.description, "x = 0")

    def test_broken_receiver_is_reported_on_entry(self) -> None:
        interpreter = Interpreter(self.load("inherited_invariant.le"))
        heap, b = interpreter.allocate({}, "B")
        heap[b]["x"] = 3
        self.assertEqual(list(interpreter.invoke(b, "check_it", [], heap)), [])
        (violation,) = interpreter.violations
        self.assertEqual((violation.kind, violation.routine), (INVARIANT, "B.check_it"))

    def test_redefinition_writes_are_visible_through_the_ancestor(self) -> None:
        result = Interpreter(self.load("frame_extension.le")).explore("CLIENT", "observe")
        self.assertEqual(_kinds(result), {ASSERTION})
        self.assertEqual(result.violations[0].description, "b.y = 0")
