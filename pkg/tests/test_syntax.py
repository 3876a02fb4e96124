from __future__ import annotations

import pytest
from hypothesis import given

from doublelogic.formula import ABin, ANeg, Atom, CBin, CNeg, Derived, alt, atom
from doublelogic.syntax import FormulaSyntaxError, parse, to_text
from strategies import formulas

a, b, x = atom("a"), atom("b"), atom("x")


def test_parse_plus_implication():
    assert parse("+x => x") == CBin("impl", Derived("plus", x), x)


def test_parse_atom():
    assert parse("a") == Atom("a", False)


def test_parse_alternate_excluded_middle():
    _a = alt("a")
    assert parse("_a \\/ !_a") == ABin("or", _a, ANeg(_a))


def test_print_plus():
    assert to_text(Derived("plus", a)) == "+a"


def test_print_right_nested_implication():
    assert to_text(CBin("impl", a, CBin("impl", b, a))) == "a => b => a"


def test_print_alternate_of_classical_negation():
    assert to_text(ANeg(CNeg(a))) == "!~a"


@pytest.mark.parametrize("text, expected", [
    ("a & b | c", "(a & b) | c"),
    ("a | b => c", "(a | b) => c"),
    ("a => b <=> c", "(a => b) <=> c"),
    ("a => b => c", "a => (b => c)"),
    ("~a & b", "(~a) & b"),
    ("a /\\ b \\/ c -> d <-> e", "(((a /\\ b) \\/ c) -> d) <-> e"),
    ("a -> b => c", "a -> (b => c)"),
])
def test_precedence_and_associativity(text, expected):
    assert parse(text) == parse(expected)


def test_left_nested_implication_keeps_parentheses():
    f = CBin("impl", CBin("impl", a, b), a)
    assert to_text(f) == "(a => b) => a"


def test_whitespace_is_ignored():
    assert parse("  ~ a=>b ") == parse("~a => b")


@pytest.mark.parametrize("bad", ["", "a &", "(a", "a)", "A", "a b", "_", "a % b", "=> a"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse(bad)


def test_error_carries_span():
    with pytest.raises(FormulaSyntaxError) as info:
        parse("a & & b")
    span = info.value.span
    assert span.start == 4


def test_metavariables_only_on_request():
    with pytest.raises(FormulaSyntaxError):
        parse("X => Y")
    assert to_text(parse("X => Y", allow_meta=True)) == "X => Y"


@given(formulas())
def test_round_trip(f):
    assert parse(to_text(f)) == f


@given(formulas())
def test_printing_is_stable(f):
    t = to_text(f)
    assert to_text(parse(t)) == t
