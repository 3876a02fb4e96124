"""Hypothesis strategies for formulas, models and graphs."""
from __future__ import annotations

from hypothesis import strategies as st

from doublelogic.formula import ABin, ANeg, CBin, CNeg, Derived, alt, atom
from doublelogic.kripke import Model
from doublelogic.batch import frame_table, mask_to_set
from doublelogic.validity import enumerate_posets

CLASSICAL_ATOMS = [atom("a"), atom("b"), atom("c")]
ALTERNATE_ATOMS = [alt("a"), alt("b")]
ALL_ATOMS = CLASSICAL_ATOMS + ALTERNATE_ATOMS
OPS = ("impl", "or", "and", "iff")


def formulas(leaves=ALL_ATOMS, max_leaves: int = 12, unary=True, classical=True, alternate=True):
    def extend(children):
        parts = []
        if unary:
            parts.append(st.builds(CNeg, children) if classical else st.nothing())
            parts.append(st.builds(ANeg, children) if alternate else st.nothing())
            if classical and alternate:
                parts.append(st.builds(Derived, st.sampled_from(("plus", "circ", "minus", "star")),
                                       children))
        if classical:
            parts.append(st.builds(CBin, st.sampled_from(OPS), children, children))
        if alternate:
            parts.append(st.builds(ABin, st.sampled_from(OPS), children, children))
        return st.one_of(*parts)

    return st.recursive(st.sampled_from(list(leaves)), extend, max_leaves=max_leaves)


fc_formulas = formulas(CLASSICAL_ATOMS, classical=True, alternate=False)
fi_formulas = formulas(ALTERNATE_ATOMS, classical=False, alternate=True)


@st.composite
def models(draw, atoms=ALL_ATOMS, max_worlds: int = 3):
    n = draw(st.integers(1, max_worlds))
    frames = list(enumerate_posets(n))
    frame = draw(st.sampled_from(frames))
    table = frame_table(frame)
    val = {}
    for a in atoms:
        if a.alternate:
            mask = int(draw(st.sampled_from(list(table.upsets))))
        else:
            mask = draw(st.integers(0, table.full))
        val[a] = mask_to_set(mask)
    return Model(frame, val)
