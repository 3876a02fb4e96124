from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from doublelogic.formula import alt, atom, kernel_form, metavars_of, plus
from doublelogic.schemas import (BASE_SCHEMAS, SCHEMAS, instantiate, is_alternate_formula,
                                 match_schema, schema_pattern, which_axiom)
from doublelogic.syntax import parse
from strategies import formulas

a, b = atom("a"), atom("b")


def test_seventeen_schemas():
    assert len(SCHEMAS) == 17
    assert SCHEMAS[0] == "Ax1.1" and SCHEMAS[-1] == "Ax2.4"
    assert "Ax2.4" not in BASE_SCHEMAS


def test_match_box_distribution():
    sub = match_schema("Ax2.1", parse("+(a => b) => (+a => +b)"))
    assert sub == {"X": a, "Y": b}


def test_match_weakening():
    assert match_schema("Ax1.1", parse("a => (b => a)")) == {"X": a, "Y": b}


def test_t_axiom_rejects_classical_atom():
    assert match_schema("Ax2.3", parse("a => +a")) is None


def test_t_axiom_accepts_alternate_formulas():
    assert match_schema("Ax2.3", parse("_a => +_a")) is not None
    assert match_schema("Ax2.3", parse("!a => +!a")) is not None
    assert match_schema("Ax2.3", parse("+a => ++a")) is not None


def test_reflexivity_axiom_spellings():
    # ¬X ⊃ ∼X with X = ∼Y reads +Y ⊃ ∼∼Y
    assert match_schema("Ax2.2", parse("!a => ~a")) == {"X": a}
    assert match_schema("Ax2.2", parse("+a => ~~a")) is not None


def test_lifted_axiom():
    assert match_schema("Ax2.4", parse("+(a => (b => a))")) == {"X": parse("a => (b => a)")}
    assert match_schema("Ax2.4", parse("+(a => a)")) is None
    # one layer only
    assert match_schema("Ax2.4", parse("++(a => (b => a))")) is None


def test_which_axiom():
    assert which_axiom(parse("a | ~a")) == "Ax1.10"
    assert which_axiom(parse("a & b => a")) == "Ax1.6"
    assert which_axiom(parse("a => b")) is None


def test_unknown_schema():
    with pytest.raises(ValueError):
        match_schema("Ax9.9", a)
    with pytest.raises(ValueError):
        schema_pattern("Ax0.1")


def test_instantiate_needs_every_variable():
    with pytest.raises(ValueError):
        instantiate("Ax1.2", {"X": a, "Y": b})


def test_is_alternate_formula():
    assert is_alternate_formula(alt("a"))
    assert is_alternate_formula(parse("+a"))
    assert is_alternate_formula(parse("a -> b"))
    assert not is_alternate_formula(parse("~!a"))
    assert not is_alternate_formula(a)


@given(st.sampled_from(BASE_SCHEMAS), st.data())
def test_instances_are_recognised(schema, data):
    names = metavars_of(schema_pattern(schema))
    sub = {n: data.draw(formulas(max_leaves=5)) for n in names}
    if schema == "Ax2.3" and not is_alternate_formula(sub["X"]):
        sub["X"] = parse("!a")
    f = instantiate(schema, sub)
    found = match_schema(schema, f)
    assert found is not None
    assert kernel_form(instantiate(schema, found)) == kernel_form(f)
    assert match_schema("Ax2.4", plus(f)) is not None


@given(formulas(max_leaves=6))
def test_t_axiom_side_condition(x):
    found = match_schema("Ax2.3", instantiate("Ax2.3", {"X": x}))
    if is_alternate_formula(x):
        assert found is not None
    if found is not None:
        assert is_alternate_formula(found["X"])
