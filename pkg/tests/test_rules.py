from __future__ import annotations

from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from doublelogic.graphs.core import EMPTY, parse_graph, read, translate
from doublelogic.graphs.golden import GOLDEN_SCRIPTS, golden_scripts
from doublelogic.graphs.rules import (DERIVED_RULES, PRIMITIVE_RULES, RuleError, Script,
                                      ScriptStep, apply_rule, check_rule_soundness, check_script,
                                      expand_fully, load_script, script_from_jsonl,
                                      script_to_jsonl)
from doublelogic.graphs.search import applications, lambda_search
from doublelogic.formula import impl, neg
from doublelogic.syntax import parse
from doublelogic.validity import VALID, decide
from support import derived_applications, graph_corpus

P = parse_graph


def step(rule, addr=(), **kw):
    return ScriptStep(rule, tuple(addr), **kw)


def test_rule_tables():
    assert len(PRIMITIVE_RULES) == 15
    assert len(DERIVED_RULES) == 11
    with pytest.raises(RuleError):
        step("XYZ")
    assert step("DCClambda").rule == "DCCλ"


def test_double_cut_at_a_node():
    assert apply_rule(P("a"), step("DCC-in", (0,))) == P("((a))")
    assert apply_rule(P("((a))"), step("DCC-out", (0,))) == P("a")


def test_cut_change_on_the_sheet():
    assert apply_rule(P("[a]"), step("CC", (0,))) == P("(a)")
    with pytest.raises(RuleError):
        apply_rule(P("(a)"), step("CC", (0,)))


def test_iteration_on_the_sheet():
    assert apply_rule(P("a"), step("I", (0,))) == P("a a")
    assert apply_rule(P("a a"), step("D", (1,))) == P("a")


def test_double_cut_from_the_empty_sheet():
    rep = check_script(Script(EMPTY, (step("DCC-in", (), sel=()),)))
    assert rep and rep.final == P("(())")


def test_erasure_guarded_by_parity():
    s = Script(P("(a b)"), (step("B", (0, 0)),))
    rep = check_script(s)
    assert not rep and rep.step == 1 and rep.rule == "B"
    assert apply_rule(P("a b"), step("B", (1,))) == P("a")


def test_writing_guarded_by_parity():
    with pytest.raises(RuleError):
        apply_rule(P("a"), step("E", (), payload=P("b")))
    assert apply_rule(P("(a)"), step("E", (0,), payload=P("b"))) == P("(a b)")


def test_copy_into_nested_area():
    g = P("a (b)")
    assert apply_rule(g, step("IC", (), sel=(0,), target=(1,))) == P("a (b a)")
    assert apply_rule(P("a (b a)"), step("DC", (), sel=(0,), target=(1,), target_sel=(1,))) == g


def test_classical_copy_stops_at_paracomplete_cut():
    with pytest.raises(RuleError):
        apply_rule(P("a [b]"), step("IC", (), sel=(0,), target=(1,)))
    # alternate graphs may cross any cut
    assert apply_rule(P("_a [b]"), step("IF", (), sel=(0,), target=(1,))) == P("_a [b _a]")


def test_alternate_double_cut_around_alternate_graph():
    assert apply_rule(P("[([a])]"), step("DCMF.1", (0,))) == P("[a]")
    assert apply_rule(P("[a]"), step("DCMF.1", (0,), dir="in")) == P("[([a])]")
    with pytest.raises(RuleError):
        apply_rule(P("a"), step("DCMF.1", (0,), dir="in"))


def test_quadruple_alternate_cut():
    assert apply_rule(P("[[[[a]]]]"), step("CCA", (0,))) == P("[[a]]")
    assert apply_rule(P("[[a]]"), step("CCA", (0,), dir="in")) == P("[[[[a]]]]")


def test_mixed_double_cut_even_direction():
    assert apply_rule(P("[(b)]"), step("DCM", (0,))) == P("b")


def test_triple_alternate_cut_needs_alternate_inside():
    assert apply_rule(P("[[[_a]]]"), step("TCAF", (0,))) == P("[_a]")
    with pytest.raises(RuleError):
        apply_rule(P("[[[a]]]"), step("TCAF", (0,)))
    with pytest.raises(RuleError):
        apply_rule(P("[[[a b]]]"), step("TCAF", (0,)))


def test_mixed_double_cut_needs_witness():
    s = step("DCMGEV-in", (), sel=(0,), witness=Script(EMPTY, ()))
    with pytest.raises(RuleError):
        apply_rule(P("a"), s)
    w = Script(EMPTY, (step("DCC-in", (), sel=()),))
    assert apply_rule(P("(())"), step("DCMGEV-in", (), sel=(0,), witness=w)) == P("[((()))]")


@pytest.mark.parametrize("name", sorted(GOLDEN_SCRIPTS))
def test_golden_scripts(name):
    path = resources.files("doublelogic").joinpath(f"data/scripts/{name}.jsonl")
    s = load_script(path)
    assert s == golden_scripts()[name]
    rep = check_script(s)
    assert rep and rep.certifies_gev
    formula = GOLDEN_SCRIPTS[name][1]
    if formula is not None:
        assert rep.final == translate(parse(formula))
    assert decide(read(rep.final), 3).tag == VALID


def test_script_jsonl_round_trip():
    s = golden_scripts()["ax1_6"]
    assert script_from_jsonl(script_to_jsonl(s)) == s
    nested = golden_scripts()["plus_ax1_1"]
    assert script_from_jsonl(script_to_jsonl(nested)) == nested


def test_soundness_examples():
    assert check_rule_soundness(P("[a]"), P("(a)"))
    assert check_rule_soundness(P("a b"), P("a"))
    assert not check_rule_soundness(P("(a)"), P("[a]"))


def test_search_finds_identity():
    goal = translate(parse("a => a"))
    s = lambda_search(goal)
    assert s is not None
    rep = check_script(s)
    assert rep and rep.final == goal


def test_search_gives_up():
    assert lambda_search(P("a"), max_depth=3) is None


@pytest.mark.parametrize("rule, graph, addr", [
    ("DCCλ", "", ()), ("DCMλ", "", ()), ("CCE", "[(a)]", (0, 0)), ("DCM", "[(a)]", (0,)),
    ("DCMF.1", "[([a])]", (0,)), ("TCM", "[_a]", (0,)), ("DCAF", "_a", (0,)),
    ("TCA", "[[[a]]]", (0,)), ("TCAF", "[[[_a]]]", (0,)), ("TCAF.1", "[[[_a]]]", (0,)),
    ("CCA", "[[[[a]]]]", (0,)),
])
def test_each_derived_rule_expands(rule, graph, addr):
    g = P(graph)
    st_ = step(rule, addr, sel=()) if rule in ("DCCλ", "DCMλ") else step(rule, addr)
    h = apply_rule(g, st_)
    prim = expand_fully(st_, g)
    assert all(p.rule in PRIMITIVE_RULES for p in prim)
    rep = check_script(Script(g, tuple(prim)))
    assert rep and rep.final == h
    assert check_rule_soundness(g, h)


# --- properties over the sampled corpus ----------------------------------------------

CORPUS = graph_corpus(extra=40)
PAYLOADS = [P("a"), P("_a"), P("(a)")]


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_primitive_applications_are_sound(g, data):
    apps = list(applications(g, PAYLOADS))
    if not apps:
        return
    st_, h = data.draw(st.sampled_from(apps))
    assert check_rule_soundness(g, h), st_.describe()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_derived_applications_replay(g, data):
    apps = list(derived_applications(g))
    if not apps:
        return
    st_, h = data.draw(st.sampled_from(apps))
    rep = check_script(Script(g, tuple(expand_fully(st_, g))))
    assert rep and rep.final == h


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_reversion(g, data):
    apps = list(applications(g, PAYLOADS))
    if not apps:
        return
    _, h = data.draw(st.sampled_from(apps))
    # (g') -> (g): from not-g' infer not-g
    f = impl(neg(read(h)), neg(read(g)))
    assert decide(f, 3).tag == VALID
