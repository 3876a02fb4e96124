from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from doublelogic.formula import alt, atom, conj, impl
from doublelogic.graphs.core import (EMPTY, VERUM_ATOM, Cut, Graph, GraphSyntaxError, area_region,
                                     eval_graph, graph_from_json, graph_to_json, graph_truth,
                                     is_alternate_graph, parse_graph, read, region_info,
                                     translate)
from doublelogic.kripke import evaluate, model_from_json
from doublelogic.syntax import parse
from doublelogic.validity import all_models
from strategies import formulas, models

P = parse_graph


def shipped(name):
    text = resources.files("doublelogic").joinpath(f"data/models/{name}.json").read_text()
    return model_from_json(json.loads(text))


# one fixture per translation clause, built from the clause's own shape
CLAUSES = [
    ("a", "a"),
    ("~a", "(a)"),
    ("a & b", "a b"),
    ("a => b", "(a(b))"),
    ("a <=> b", "(a(b))(b(a))"),
    ("a | b", "((a)(b))"),
    ("!a", "[a]"),
    ("+a", "[(a)]"),
    ("a -> b", "[a(b)]"),
    ("a \\/ b", "[(a)(b)]"),
    ("a /\\ b", "[(a b)]"),
    ("a <-> b", "[a(b)][b(a)]"),
]


@pytest.mark.parametrize("formula, graph", CLAUSES)
def test_translation_clauses(formula, graph):
    assert translate(parse(formula)) == P(graph)


def test_translation_clauses_compose():
    assert translate(parse("~(a => !b)")) == P("((a([b])))")
    assert translate(parse("+(a & b) <=> +a & +b")) == P("([(a b)]([(a)][(b)]))([(a)][(b)]([(a b)]))")


def test_weakening_axiom_clause():
    # the empty sheet says what any Ax1.1 instance says: true everywhere
    batch = all_models(3, [atom("a"), atom("b")])
    ax = parse("a => (b => a)")
    assert (graph_truth(batch, EMPTY) == batch.truth(ax)).all()
    assert (batch.truth(ax) == batch.full).all()


def test_derived_operators_go_through_definitions():
    assert translate(parse("?a")) == translate(parse("~!a"))
    assert translate(parse("#a")) == translate(parse("~+a"))
    assert translate(parse("*a")) == translate(parse("!a | +a"))


def test_read_examples():
    assert read(P("[(a)]")) == parse("!~a")
    assert read(EMPTY) == impl(VERUM_ATOM, VERUM_ATOM)
    assert read(P("(a(b))")) == parse("~(a & ~b)")
    assert read(P("a b _c")) == conj(atom("a"), conj(atom("b"), alt("c")))


def test_eval_graph_examples():
    m5 = shipped("liar")
    assert eval_graph(m5, "MA", EMPTY) == 1
    assert eval_graph(m5, "M1", EMPTY) == 1
    assert eval_graph(m5, "MA", P("[x]")) == 0
    m2 = shipped("plus_gap")
    assert eval_graph(m2, "M2", P("[(x)]")) == 1


def test_regions():
    r = region_info(P("(a)"), (0, 0))
    assert (r.parity, r.classicality) == ("odd", "classical")
    r = region_info(P("[(a)]"), (0, 0, 0))
    assert (r.parity, r.classicality) == ("even", "alternate")
    r = region_info(P("a"), ())
    assert (r.parity, r.classicality) == ("even", "classical")
    assert area_region(P("[(a)]"), (0,)).parity == "odd"


def test_alternate_graphs():
    assert is_alternate_graph(P("[a b]"))
    assert is_alternate_graph(P("_a"))
    assert not is_alternate_graph(P("(a)"))
    assert not is_alternate_graph(P("a"))
    assert not is_alternate_graph(P("[a] [b]"))


def test_graph_text_and_equality():
    g = P("b (a [c])")
    assert g.text() == "b(a[c])"
    assert g == P("([c] a) b")
    assert hash(g) == hash(P("([c] a) b"))
    assert P("") == EMPTY and EMPTY.is_empty


@pytest.mark.parametrize("bad", ["(a", "a)", "[a)", "A", "(a]]", "a % b"])
def test_graph_syntax_errors(bad):
    with pytest.raises(GraphSyntaxError):
        P(bad)


def test_graph_json():
    g = P("a [(b) _c]")
    data = graph_to_json(g)
    assert data == ["a", ["p", ["c", "b"], "_c"]]
    assert graph_from_json(data) == g
    with pytest.raises(ValueError):
        graph_from_json([["x", "a"]])


# --- properties ---------------------------------------------------------------

@given(models(), formulas(max_leaves=10))
def test_translation_preserves_truth(m, f):
    g = translate(f)
    for w in range(m.frame.size):
        assert eval_graph(m, w, g) == evaluate(m, w, f)


@given(models(), formulas(max_leaves=10))
def test_reading_preserves_truth(m, f):
    g = translate(f)
    for w in range(m.frame.size):
        assert evaluate(m, w, read(g)) == eval_graph(m, w, g)


@given(formulas(max_leaves=10))
def test_graph_text_round_trip(f):
    g = translate(f)
    assert P(g.text()) == g
    assert graph_from_json(graph_to_json(g)) == g


@lru_cache(maxsize=None)
def _small_batch():
    return all_models(2, [atom("a"), atom("b"), atom("c")], [alt("a"), alt("b")])


@settings(max_examples=60)
@given(formulas(max_leaves=6), formulas(max_leaves=6), st.sampled_from(["(p)", "[p]", "p q", "[(p q)]", "(q[p])"]))
def test_substituting_a_graph_for_an_atom(f1, f2, context):
    """Graph truth is compositional: an atom may be replaced by any graph of equal truth."""
    p, q = atom("p"), atom("q")
    g1, g2 = translate(f1), translate(f2)

    def plug(area):
        nodes = []
        for n in area.nodes:
            if n == p:
                nodes += g1.nodes
            elif n == q:
                nodes += g2.nodes
            elif isinstance(n, Cut):
                nodes.append(Cut(n.kind, plug(n.area)))
            else:
                nodes.append(n)
        return Graph(tuple(nodes))

    base = _small_batch()
    ctx = P(context)
    plugged = plug(ctx)
    base.atoms[p] = graph_truth(base, g1)
    base.atoms[q] = graph_truth(base, g2)
    assert np.array_equal(graph_truth(base, plugged), graph_truth(base, ctx))
