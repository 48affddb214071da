"""Heap model declarations shared by every translated program."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..frontend.typecheck import TypedProgram
from ..ivl import ast as ivl
from .context import allocated, field_name, sort_of, unbox


@dataclass
class Prelude:
    types: list[ivl.TypeDecl] = field(default_factory=list)
    constants: list[ivl.ConstDecl] = field(default_factory=list)
    globals: list[ivl.GlobalVar] = field(default_factory=list)
    functions: list[ivl.FunctionDecl] = field(default_factory=list)
    axioms: list[ivl.Axiom] = field(default_factory=list)


def _subtype_axioms(typed: TypedProgram) -> list[ivl.Axiom]:
    t, u, v = ivl.Var("t"), ivl.Var("u"), ivl.Var("v")
    axioms = [
        ivl.Axiom(ivl.Quant("forall", (("t", ivl.TYPENAME),), ivl.subtype(t, t)), "<: is reflexive"),
        ivl.Axiom(
            ivl.Quant(
                "forall",
                (("t", ivl.TYPENAME), ("u", ivl.TYPENAME), ("v", ivl.TYPENAME)),
                ivl.implies(ivl.and_(ivl.subtype(t, u), ivl.subtype(u, v)), ivl.subtype(t, v)),
            ),
            "<: is transitive",
        ),
        ivl.Axiom(
            ivl.Quant(
                "forall",
                (("t", ivl.TYPENAME), ("u", ivl.TYPENAME)),
                ivl.implies(ivl.and_(ivl.subtype(t, u), ivl.subtype(u, t)), ivl.eq(t, u)),
            ),
            "<: is antisymmetric",
        ),
    ]
    names = [ivl.NONE_TYPE, *typed.class_names()]
    for sub in names:
        for sup in names:
            if sub == sup:
                continue
            atom = ivl.subtype(ivl.Var(sub), ivl.Var(sup))
            holds = sub == ivl.NONE_TYPE or (sup != ivl.NONE_TYPE and sup in typed.ancestors(sub))
            axioms.append(ivl.Axiom(atom if holds else ivl.not_(atom)))
    return axioms


def _heap_wf_axioms(typed: TypedProgram) -> list[ivl.Axiom]:
    h, o = ivl.Var("h"), ivl.Var("o")
    wf = ivl.FunApp(ivl.HEAP_WF, (h,))
    void = ivl.Var(ivl.VOID)
    axioms = [
        ivl.Axiom(
            ivl.Quant("forall", (("h", ivl.HEAP),), ivl.implies(wf, ivl.not_(allocated(h, void)))),
            "Void is never allocated",
        )
    ]
    for cls in typed.source.classes:
        for attr in cls.attributes:
            if sort_of(attr.type_name) != ivl.REF:
                continue
            value = unbox(ivl.select(h, o, field_name(cls.name, attr.name)), ivl.REF)
            body = ivl.implies(
                ivl.and_(wf, allocated(h, o)),
                ivl.or_(ivl.eq(value, void), allocated(h, value)),
            )
            axioms.append(
                ivl.Axiom(
                    ivl.Quant("forall", (("h", ivl.HEAP), ("o", ivl.REF)), body),
                    f"{cls.name}.{attr.name} holds Void or an allocated object",
                )
            )
    return axioms


def build_prelude(typed: TypedProgram) -> Prelude:
    prelude = Prelude()
    prelude.types = [
        ivl.TypeDecl(ivl.REF),
        ivl.TypeDecl(ivl.FIELD),
        ivl.TypeDecl(ivl.TYPENAME),
        ivl.TypeDecl(ivl.VALUE),
        ivl.TypeDecl(ivl.HEAP, f"[{ivl.REF}, {ivl.FIELD}]{ivl.VALUE}"),
    ]
    prelude.constants.append(ivl.ConstDecl(ivl.VOID, ivl.REF))
    prelude.constants.append(ivl.ConstDecl(ivl.ALLOCATED, ivl.FIELD, unique=True))
    for cls in typed.source.classes:
        for attr in cls.attributes:
            prelude.constants.append(ivl.ConstDecl(field_name(cls.name, attr.name), ivl.FIELD, unique=True))
    prelude.constants.append(ivl.ConstDecl(ivl.NONE_TYPE, ivl.TYPENAME, unique=True))
    for name in typed.class_names():
        prelude.constants.append(ivl.ConstDecl(name, ivl.TYPENAME, unique=True))
    prelude.globals = [ivl.GlobalVar(ivl.HEAP_VAR, ivl.HEAP), ivl.GlobalVar(ivl.EXCV_VAR, ivl.BOOL)]

    prelude.functions.append(ivl.FunctionDecl(ivl.TYPE_FN, (("o", ivl.REF),), ivl.TYPENAME))
    for sort, to_value, from_value in ivl.VALUE_INJECTIONS:
        prelude.functions.append(ivl.FunctionDecl(to_value, (("x", sort),), ivl.VALUE))
        prelude.functions.append(ivl.FunctionDecl(from_value, (("v", ivl.VALUE),), sort))
        x = ivl.Var("x")
        prelude.axioms.append(
            ivl.Axiom(
                ivl.Quant(
                    "forall", (("x", sort),), ivl.eq(ivl.FunApp(from_value, (ivl.FunApp(to_value, (x,)),)), x)
                ),
                f"{from_value} inverts {to_value}",
            )
        )
    prelude.functions.append(ivl.FunctionDecl(ivl.HEAP_WF, (("h", ivl.HEAP),), ivl.BOOL))
    prelude.axioms.append(ivl.Axiom(ivl.eq(ivl.type_of(ivl.Var(ivl.VOID)), ivl.Var(ivl.NONE_TYPE))))
    prelude.axioms.extend(_subtype_axioms(typed))
    prelude.axioms.extend(_heap_wf_axioms(typed))
    return prelude
