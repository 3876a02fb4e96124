"""Existential graphs with classical and paracomplete cuts.

A graph is an *area*: a juxtaposition of nodes, each an atom or a cut around
another area.  Text syntax::

    a b          juxtaposition (whitespace only needed between atoms)
    (X)          classical cut
    [X]          paracomplete cut
    _a           alternate atom
                 the empty string is the empty graph λ

Areas keep the order in which nodes were written, which is what rule
addresses index into.  Equality and hashing use the canonical form, in which
every area is sorted, so juxtaposition behaves as a multiset.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from ..batch import ModelBatch
from ..formula import (ANeg, Atom, CBin, CNeg, Derived, Formula, Meta, aneg,
                       conj, impl, neg)
from ..kripke import Model, ModelError, world_index

__all__ = ["Cut", "Graph", "Node", "GraphSyntaxError", "CLASSICAL", "PARACOMPLETE",
           "EMPTY", "parse_graph", "translate", "read", "VERUM_ATOM",
           "eval_graph", "graph_truth", "RegionInfo", "region_info",
           "is_alternate_graph", "graph_to_json", "graph_from_json",
           "area_at", "node_at", "atoms_of_graph"]

CLASSICAL, PARACOMPLETE = "classical", "paracomplete"
VERUM_ATOM = Atom("a0")  # reserved: the empty area reads as a0 ⊃ a0


@dataclass(frozen=True, eq=False)
class Cut:
    kind: str
    area: Graph

    def __post_init__(self):
        if self.kind not in (CLASSICAL, PARACOMPLETE):
            raise ValueError(f"unknown cut kind {self.kind!r}")

    @property
    def classical(self) -> bool:
        return self.kind == CLASSICAL

    def text(self) -> str:
        o, c = ("(", ")") if self.classical else ("[", "]")
        return o + self.area.text() + c

    def canonical(self) -> str:
        o, c = ("(", ")") if self.classical else ("[", "]")
        return o + self.area.canonical() + c

    def __eq__(self, other):
        return isinstance(other, Cut) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Cut({self.text()!r})"


Node = Union[Atom, Cut]


def _node_text(n: Node, canonical: bool = False) -> str:
    if isinstance(n, Atom):
        return str(n)
    return n.canonical() if canonical else n.text()


def _join(parts: Sequence[str]) -> str:
    out = ""
    for p in parts:
        if out and out[-1] not in "([" and p[0] not in ")][(":
            out += " "
        out += p
    return out


@dataclass(frozen=True, eq=False)
class Graph:
    nodes: tuple[Node, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))

    def text(self) -> str:
        """Text in stored order."""
        return _join([_node_text(n) for n in self.nodes])

    def canonical(self) -> str:
        key = self.__dict__.get("_canon")
        if key is None:
            key = _join(sorted(_node_text(n, True) for n in self.nodes))
            object.__setattr__(self, "_canon", key)
        return key

    def sorted(self) -> Graph:
        """Same graph with every area in canonical order."""
        kids = [n if isinstance(n, Atom) else Cut(n.kind, n.area.sorted()) for n in self.nodes]
        return Graph(tuple(sorted(kids, key=lambda n: _node_text(n, True))))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __add__(self, other: Graph) -> Graph:
        return Graph(self.nodes + other.nodes)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Graph({self.text()!r})"

    @property
    def is_empty(self) -> bool:
        return not self.nodes


EMPTY = Graph(())


def ccut(*nodes: Node) -> Cut:
    return Cut(CLASSICAL, Graph(nodes))


def pcut(*nodes: Node) -> Cut:
    return Cut(PARACOMPLETE, Graph(nodes))


# --- text I/O -----------------------------------------------------------------

class GraphSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


_TOK = re.compile(r"\s*(?:(_?[a-z][a-z0-9]*)|([()\[\]]))")


def parse_graph(text: str) -> Graph:
    """Parse the text syntax; the empty string gives λ."""
    stack: list[tuple[Optional[str], list, int]] = [(None, [], 0)]
    pos = 0
    while True:
        m = _TOK.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise GraphSyntaxError(f"unexpected {text[pos:].lstrip()[0]!r}",
                                       len(text) - len(text[pos:].lstrip()))
            break
        name, br = m.groups()
        start = m.start(1) if name else m.start(2)
        pos = m.end()
        if name:
            stack[-1][1].append(Atom(name.lstrip("_"), name.startswith("_")))
        elif br in "([":
            stack.append((br, [], start))
        else:
            opener, kids, at = stack.pop() if len(stack) > 1 else (None, None, start)
            if opener is None or {"(": ")", "[": "]"}[opener] != br:
                raise GraphSyntaxError(f"unbalanced {br!r}", start)
            kind = CLASSICAL if opener == "(" else PARACOMPLETE
            stack[-1][1].append(Cut(kind, Graph(tuple(kids))))
    if len(stack) > 1:
        raise GraphSyntaxError(f"unclosed {stack[-1][0]!r}", stack[-1][2])
    return Graph(tuple(stack[0][1]))


def graph_to_json(g: Graph) -> list:
    """Nested arrays: atoms as strings, cuts as ["c", ...] or ["p", ...]."""
    out = []
    for n in g.nodes:
        if isinstance(n, Atom):
            out.append(str(n))
        else:
            out.append(["c" if n.classical else "p", *graph_to_json(n.area)])
    return out


def graph_from_json(data: list) -> Graph:
    nodes = []
    for item in data:
        if isinstance(item, str):
            nodes.append(Atom(item.lstrip("_"), item.startswith("_")))
        elif isinstance(item, list) and item and item[0] in ("c", "p"):
            nodes.append(Cut(CLASSICAL if item[0] == "c" else PARACOMPLETE,
                             graph_from_json(item[1:])))
        else:
            raise ValueError(f"bad graph node {json.dumps(item)}")
    return Graph(tuple(nodes))


# --- formulas <-> graphs --------------------------------------------------------

def _g(*nodes: Node) -> Graph:
    return Graph(nodes)


def _c(g: Graph) -> Cut:
    return Cut(CLASSICAL, g)


def _p(g: Graph) -> Cut:
    return Cut(PARACOMPLETE, g)


@lru_cache(maxsize=1 << 16)
def translate(f: Formula) -> Graph:
    """Graph of a formula, clause by clause; ⊗, − and * go via their definitions."""
    if isinstance(f, Atom):
        return _g(f)
    if isinstance(f, Meta):
        raise ValueError("schema variables have no graph")
    if isinstance(f, CNeg):
        return _g(_c(translate(f.arg)))
    if isinstance(f, ANeg):
        return _g(_p(translate(f.arg)))
    if isinstance(f, Derived):
        x = translate(f.arg)
        box = _p(_g(_c(x)))                       # +X
        if f.op == "plus":
            return _g(box)
        if f.op == "circ":                        # ∼¬X
            return _g(_c(_g(_p(x))))
        if f.op == "minus":                       # ∼+X
            return _g(_c(_g(box)))
        return _g(_c(_g(_c(_g(_p(x))), _c(_g(box)))))   # ¬X ∪ +X
    x, y = translate(f.left), translate(f.right)
    if isinstance(f, CBin):
        if f.op == "and":
            return x + y
        if f.op == "impl":
            return _g(_c(x + _g(_c(y))))
        if f.op == "iff":
            return _g(_c(x + _g(_c(y))), _c(y + _g(_c(x))))
        return _g(_c(_g(_c(x), _c(y))))
    if f.op == "impl":
        return _g(_p(x + _g(_c(y))))
    if f.op == "or":
        return _g(_p(_g(_c(x), _c(y))))
    if f.op == "and":
        return _g(_p(_g(_c(x + y))))
    return _g(_p(x + _g(_c(y))), _p(y + _g(_c(x))))


def read(g: Graph) -> Formula:
    """A formula whose translation means the same as ``g``.

    Juxtaposition reads as •, ( ) as ∼, [ ] as ¬, and the empty area as the
    tautology a0 ⊃ a0.
    """
    if g.is_empty:
        return impl(VERUM_ATOM, VERUM_ATOM)
    parts = []
    for n in g.nodes:
        if isinstance(n, Atom):
            parts.append(n)
        else:
            inner = read(n.area)
            parts.append(neg(inner) if n.classical else aneg(inner))
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = conj(p, out)
    return out


# --- semantics -------------------------------------------------------------------

def eval_graph(m: Model, w, g: Graph) -> int:
    """Truth value of ``g`` at world ``w``."""
    succ = [m.frame.successors(v) for v in range(m.frame.size)]
    memo: dict = {}

    def area(v: int, a: Graph) -> int:
        return int(all(node(v, n) for n in a.nodes))

    def node(v: int, n: Node) -> int:
        if isinstance(n, Atom):
            return m.value(v, n)
        key = (v, id(n))
        if key not in memo:
            if n.classical:
                memo[key] = 1 - area(v, n.area)
            else:
                memo[key] = int(all(area(u, n.area) == 0 for u in succ[v]))
        return memo[key]

    return area(world_index(m, w), g)


def graph_truth(batch: ModelBatch, g: Graph) -> np.ndarray:
    """Truth masks of ``g`` in every model of a batch."""
    out = batch.full.copy()
    for n in g.nodes:
        if isinstance(n, Atom):
            try:
                val = batch.atoms[n]
            except KeyError:
                raise ModelError(f"atom {n} has no valuation in this model") from None
        else:
            inner = graph_truth(batch, n.area)
            val = batch.cneg(inner) if n.classical else batch.aneg(inner)
        out = out & val
    return out


def atoms_of_graph(g: Graph) -> list[Atom]:
    found = set()
    stack = [g]
    while stack:
        a = stack.pop()
        for n in a.nodes:
            if isinstance(n, Atom):
                found.add(n)
            else:
                stack.append(n.area)
    return sorted(found, key=lambda a: (a.alternate, a.name))


# --- regions and addresses --------------------------------------------------------

@dataclass(frozen=True)
class RegionInfo:
    parity: str          # "even" | "odd"
    classicality: str    # "classical" | "alternate"
    cuts: int
    paracomplete_cuts: int

    @property
    def even(self) -> bool:
        return self.parity == "even"

    @property
    def alternate(self) -> bool:
        return self.classicality == "alternate"


def _walk(g: Graph, path: Sequence[int]) -> Iterator[Node]:
    area = g
    for depth, i in enumerate(path):
        if not isinstance(i, int) or not 0 <= i < len(area.nodes):
            raise IndexError(f"address {list(path)} is invalid at position {depth}")
        n = area.nodes[i]
        yield n
        if depth < len(path) - 1:
            if isinstance(n, Atom):
                raise IndexError(f"address {list(path)} passes through atom {n}")
            area = n.area


def node_at(g: Graph, path: Sequence[int]) -> Node:
    if not path:
        raise IndexError("the empty address names the sheet, not a node")
    *_, last = _walk(g, path)
    return last


def area_at(g: Graph, path: Sequence[int]) -> Graph:
    """The area inside the cut at ``path`` (the sheet for the empty path)."""
    if not path:
        return g
    n = node_at(g, path)
    if isinstance(n, Atom):
        raise IndexError(f"address {list(path)} names atom {n}, not a cut")
    return n.area


def cuts_on(g: Graph, path: Sequence[int]) -> list[Cut]:
    """Cuts passed through by ``path``; the last element counts if it is a cut."""
    return [n for n in _walk(g, path) if isinstance(n, Cut)]


def region_info(g: Graph, path: Sequence[int]) -> RegionInfo:
    """Region of the node at ``path`` (the sheet itself for the empty path)."""
    enclosing = cuts_on(g, path[:-1]) if path else []
    if path:
        node_at(g, path)  # validate the last index
    k = len(enclosing)
    pk = sum(1 for c in enclosing if not c.classical)
    return RegionInfo("even" if k % 2 == 0 else "odd",
                      "alternate" if pk else "classical", k, pk)


def area_region(g: Graph, path: Sequence[int]) -> RegionInfo:
    """Region of the area at ``path`` (inside the cut it names)."""
    area_at(g, path)
    enclosing = cuts_on(g, path)
    k = len(enclosing)
    pk = sum(1 for c in enclosing if not c.classical)
    return RegionInfo("even" if k % 2 == 0 else "odd",
                      "alternate" if pk else "classical", k, pk)


def is_alternate_graph(g: Graph) -> bool:
    """A single paracomplete cut or a single alternate atom."""
    if len(g.nodes) != 1:
        return False
    n = g.nodes[0]
    return (isinstance(n, Atom) and n.alternate) or (isinstance(n, Cut) and not n.classical)
