"""Frame conditions: which heap locations a routine may change.

Every version of a routine starts from the frame of the original declaration.
A redefinition's ``modify`` clause may add attributes declared below the
original's class and nothing else; each such attribute joins the frame of
every version of the routine along its inheritance line, so a caller holding
an ancestor's view never assumes it unchanged.
"""

from __future__ import annotations

from ..errors import FrameReceiverUnsupported, FrameWidened
from ..frontend import ast as src
from ..frontend.printer import format_expr
from ..frontend.typecheck import TypedProgram
from ..ivl import ast as ivl
from .context import CURRENT_RECEIVER, ExprEnv, FrameSpec, allocated, field_name

__all__ = ["frame_condition", "infer_frame", "modify_pair"]

Pairs = frozenset[tuple[str, str]]


def infer_frame(typed: TypedProgram, cls: str, routine_name: str) -> FrameSpec:
    """Frame of the version of ``routine_name`` in effect in ``cls``.

    The base is the original declaration's ``modify`` clause or, without one,
    every (receiver, attribute) read in its ensure clauses, ``old`` included.
    Attributes added by redefinitions above or below that version extend it.
    Raises ``FrameWidened`` when a redefinition lists anything else.
    """
    version, owner = typed.lookup_routine(cls, routine_name) or (None, None)
    original, original_owner = typed.original(cls, routine_name) or (None, None)
    if version is None or original is None:
        raise KeyError(f"{cls}.{routine_name}")
    base = _base_frame(typed, original, original_owner, routine_name)
    related = {*typed.ancestors(owner), *typed.descendants(owner)}
    added: set[tuple[str, str]] = set()
    for site, redefinition in _redefinitions(typed, original_owner, routine_name):
        extra = _added_pairs(typed, site, redefinition, original, original_owner, base)
        if site in related:
            added |= extra
    pairs = _rename(base, original, version) | added
    return FrameSpec(frozenset(pairs), inferred=original.modify is None and not added)


def modify_pair(typed: TypedProgram, owner: str, routine: src.RoutineDecl, entry: str) -> tuple[str, str] | None:
    """``(receiver, Field constant)`` for one ``modify`` entry: ``attr`` or ``formal.attr``."""
    receiver, _, name = entry.rpartition(".")
    if not receiver:
        found = typed.lookup_attribute(owner, name)
        return (CURRENT_RECEIVER, field_name(found[1], name)) if found else None
    formal = next((f for f in routine.formals if f.name == receiver), None)
    found = typed.lookup_attribute(formal.type_name, name) if formal else None
    return (receiver, field_name(found[1], name)) if found else None


def _modify_pairs(typed: TypedProgram, owner: str, routine: src.RoutineDecl) -> Pairs:
    pairs = (modify_pair(typed, owner, routine, entry) for entry in routine.modify or [])
    return frozenset(pair for pair in pairs if pair is not None)


def _base_frame(typed: TypedProgram, original: src.RoutineDecl, original_owner: str, routine_name: str) -> Pairs:
    if original.modify is not None:
        return _modify_pairs(typed, original_owner, original)
    pairs: set[tuple[str, str]] = set()
    for clause in original.contract.ensure:
        for node in src.walk_expr(clause.expr):
            if not isinstance(node, src.Access) or node.kind != "attribute":
                continue
            receiver = _receiver(node)
            if receiver is None:
                raise FrameReceiverUnsupported(
                    f"{original_owner}.{routine_name}", _describe(node.target), span=node.span
                )
            pairs.add((receiver, field_name(node.owner or original_owner, node.name)))
    return frozenset(pairs)


def _redefinitions(typed: TypedProgram, original_owner: str, routine_name: str):
    """``(class, declaration)`` for every redefinition with its own ``modify`` clause."""
    for site in typed.descendants(original_owner):
        routine = typed.classes[site].routine(routine_name)
        if site != original_owner and routine is not None and routine.modify is not None:
            yield site, routine


def _added_pairs(
    typed: TypedProgram,
    site: str,
    redefinition: src.RoutineDecl,
    original: src.RoutineDecl,
    original_owner: str,
    base: Pairs,
) -> set[tuple[str, str]]:
    allowed = _rename(base, original, redefinition)
    added = set()
    for entry in redefinition.modify or []:
        pair = modify_pair(typed, site, redefinition, entry)
        if pair is None or pair in allowed:
            continue
        receiver, field_const = pair
        declared_in = field_const.split(".", 1)[0]
        below = declared_in != original_owner and original_owner in typed.ancestors(declared_in)
        if receiver != CURRENT_RECEIVER or not below:
            raise FrameWidened(f"{site}.{redefinition.name}", entry, original_owner, span=redefinition.span)
        added.add(pair)
    return added


def _rename(pairs: Pairs, original: src.RoutineDecl, version: src.RoutineDecl) -> set[tuple[str, str]]:
    renaming = {old.name: new.name for old, new in zip(original.formals, version.formals)}
    return {(renaming.get(receiver, receiver), field_const) for receiver, field_const in pairs}


def _receiver(node: src.Access) -> str | None:
    target = node.target
    if target is None or isinstance(target, src.CurrentRef):
        return CURRENT_RECEIVER
    if isinstance(target, src.Old):
        target = target.operand
    if isinstance(target, src.Access) and target.kind == "formal":
        return target.name
    return None


def _describe(target: src.Expr | None) -> str:
    return "Current" if target is None else format_expr(target)


def frame_condition(spec: FrameSpec, env: ExprEnv) -> ivl.Expr:
    """``forall o, f :: allocated-before && (o, f) not in mod ==> Heap[o, f] == old(Heap)[o, f]``."""
    obj, fld = ivl.Var("$o"), ivl.Var("$f")
    old_heap = ivl.Old(env.heap)
    listed = []
    for receiver, field_const in spec.sorted_pairs():
        ref = env.current if receiver == CURRENT_RECEIVER else env.names.get(receiver, ivl.Var(receiver))
        listed.append(ivl.and_(ivl.eq(obj, ref), ivl.eq(fld, ivl.Var(field_const))))
    guard = ivl.and_(allocated(old_heap, obj), ivl.not_(ivl.or_(*listed))) if listed else allocated(old_heap, obj)
    body = ivl.implies(guard, ivl.eq(ivl.MapSelect(env.heap, obj, fld), ivl.MapSelect(old_heap, obj, fld)))
    return ivl.Quant("forall", (("$o", ivl.REF), ("$f", ivl.FIELD)), body)
