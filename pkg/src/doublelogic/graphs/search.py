"""Candidate rule applications and a bounded search from the empty sheet.

:func:`candidate_steps` lists primitive-rule steps that are worth trying on
a graph (they may still be rejected by :func:`apply_rule`).
:func:`lambda_search` is a best-effort breadth-first search for a short
derivation of a goal graph; it uses a small subset of the moves and gives up
past ``max_depth`` steps or ``max_states`` graphs.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional

from .core import EMPTY, PARACOMPLETE, Atom, Cut, Graph
from .rules import RuleError, Script, ScriptStep, apply_rule

__all__ = ["candidate_steps", "applications", "lambda_search", "graph_size", "areas"]

_LAMBDA = Script(EMPTY, ())
SEARCH_RULES = frozenset({"DCC-in", "E", "IC", "CC", "DCMF"})


def graph_size(g: Graph) -> int:
    return sum(1 if isinstance(n, Atom) else 1 + graph_size(n.area) for n in g.nodes)


def _nodes(g: Graph) -> Iterator:
    for n in g.nodes:
        yield n
        if isinstance(n, Cut):
            yield from _nodes(n.area)


def areas(g: Graph, path=()) -> Iterator[tuple[tuple[int, ...], Graph]]:
    """Every area with its address, the sheet first."""
    yield path, g
    for i, n in enumerate(g.nodes):
        if isinstance(n, Cut):
            yield from areas(n.area, path + (i,))


def _inside(tpath, path, i) -> bool:
    # target area lies below ``path`` but not inside the source node itself
    return len(tpath) > len(path) and tpath[:len(path)] == path and tpath[len(path)] != i


def candidate_steps(g: Graph, payloads: Iterable[Graph] = (),
                    rules: Optional[Iterable[str]] = None) -> Iterator[ScriptStep]:
    """Primitive steps addressing single nodes or empty selections of ``g``."""
    allowed = None if rules is None else frozenset(rules)
    want = (lambda r: True) if allowed is None else allowed.__contains__
    payloads = list(payloads)
    all_areas = list(areas(g))
    if want("Rλ") and g.is_empty:
        yield ScriptStep("Rλ", ())
    for path, area in all_areas:
        if want("DCC-in"):
            yield ScriptStep("DCC-in", path, sel=())
        if want("DCMGEV-in"):
            yield ScriptStep("DCMGEV-in", path, sel=(), witness=_LAMBDA)
        if want("E") and len(path) % 2:
            for piece in payloads:
                yield ScriptStep("E", path, payload=piece)
        for i, n in enumerate(area.nodes):
            here = path + (i,)
            for r in ("B", "I", "D", "DCC-in", "DCMF"):
                if want(r):
                    yield ScriptStep(r, here)
            if isinstance(n, Cut):
                for r in ("DCC-out", "CC"):
                    if want(r):
                        yield ScriptStep(r, here)
                if (want("DCMGEV-out") and n.kind == PARACOMPLETE and len(n.area.nodes) == 1
                        and isinstance(n.area.nodes[0], Cut) and n.area.nodes[0].area.is_empty):
                    yield ScriptStep("DCMGEV-out", here, witness=_LAMBDA)
            for tpath, tarea in all_areas:
                if not _inside(tpath, path, i):
                    continue
                for r in ("IC", "IF"):
                    if want(r):
                        yield ScriptStep(r, path, sel=(i,), target=tpath)
                for j, m in enumerate(tarea.nodes):
                    if m == n:
                        for r in ("DC", "DF"):
                            if want(r):
                                yield ScriptStep(r, path, sel=(i,), target=tpath, target_sel=(j,))


def applications(g: Graph, payloads: Iterable[Graph] = (),
                 rules: Optional[Iterable[str]] = None) -> Iterator[tuple[ScriptStep, Graph]]:
    """Candidate steps that the rule engine accepts, with their results."""
    for st in candidate_steps(g, payloads, rules):
        try:
            yield st, apply_rule(g, st)
        except (RuleError, IndexError):
            continue


def lambda_search(goal: Graph, max_depth: int = 6, max_states: int = 20000,
                  slack: int = 2) -> Optional[Script]:
    """Shortest script (within the limits) turning the empty sheet into ``goal``.

    Writes only pieces of ``goal`` and prunes graphs larger than ``goal`` by
    more than ``slack`` nodes.  Returns None when nothing is found.
    """
    vocab = sorted({Graph((n,)) for n in _nodes(goal)}, key=Graph.canonical)
    limit = graph_size(goal) + slack
    parent: dict[Graph, Optional[tuple[Graph, ScriptStep]]] = {EMPTY: None}
    frontier = deque([(EMPTY, 0)])
    while frontier:
        g, d = frontier.popleft()
        if g == goal:
            steps = []
            while parent[g] is not None:
                g, st = parent[g]
                steps.append(st)
            return Script(EMPTY, tuple(reversed(steps)))
        if d >= max_depth:
            continue
        for st, h in applications(g, vocab, SEARCH_RULES):
            if h in parent or graph_size(h) > limit:
                continue
            parent[h] = (g, st)
            if len(parent) > max_states:
                return None
            frontier.append((h, d + 1))
    return None
