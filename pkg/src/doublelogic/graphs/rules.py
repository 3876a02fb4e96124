"""Transformation rules on graphs, derived-rule expansion and script checking.

Addressing
----------
``addr`` is a list of child indices from the sheet.  A rule that acts on a
part X of an area takes either

* ``addr`` naming one node (X is that node), or
* ``addr`` naming an area (``[]`` is the sheet, otherwise a cut whose inside
  is meant) together with ``sel``, the indices of the nodes forming X in
  that area (``sel = []`` selects the empty graph).

With ``sel`` absent and ``addr = []`` the whole sheet is selected.  Rules
that copy or remove across cuts (IC, DC, IF, DF) also name a ``target`` area
and, for removals, ``target_sel``.  Derived rules valid in both directions
take ``dir``: ``"in"`` adds cuts, ``"out"`` removes them.

Parity of a selection is the parity of its area (number of enclosing cuts).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from ..formula import Atom
from ..validity import all_models
from .core import (CLASSICAL, EMPTY, PARACOMPLETE, Cut, Graph, Node,
                   area_at, area_region, atoms_of_graph, cuts_on, graph_truth,
                   is_alternate_graph, node_at, parse_graph, region_info)

__all__ = ["PRIMITIVE_RULES", "DERIVED_RULES", "RuleError", "ScriptStep",
           "Script", "ScriptReport", "apply_rule", "check_script",
           "expand_derived", "expand_fully", "check_rule_soundness",
           "script_to_jsonl", "script_from_jsonl", "load_script",
           "save_script", "normalize_rule"]

PRIMITIVE_RULES = ("Rλ", "B", "E", "DCC-in", "DCC-out", "CC", "DCMGEV-in",
                   "DCMGEV-out", "DCMF", "I", "D", "IC", "DC", "IF", "DF")
DERIVED_RULES = ("DCCλ", "DCM", "DCMλ", "CCE", "DCMF.1", "TCM", "DCAF", "TCA",
                 "TCAF", "TCAF.1", "CCA")
_ALIASES = {"Rlambda": "Rλ", "DCClambda": "DCCλ", "DCMlambda": "DCMλ"}


def normalize_rule(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in PRIMITIVE_RULES + DERIVED_RULES:
        raise RuleError(f"unknown rule {name!r}")
    return name


class RuleError(ValueError):
    pass


Path_ = tuple[int, ...]


@dataclass(frozen=True)
class ScriptStep:
    rule: str
    addr: Path_ = ()
    sel: Optional[Path_] = None
    payload: Optional[Graph] = None
    target: Optional[Path_] = None
    target_sel: Optional[Path_] = None
    witness: Optional["Script"] = None
    dir: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "rule", normalize_rule(self.rule))
        for name in ("addr", "sel", "target", "target_sel"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(v))
        if self.dir not in (None, "in", "out"):
            raise RuleError(f"dir must be 'in' or 'out', got {self.dir!r}")

    def describe(self) -> str:
        parts = [self.rule, f"addr={list(self.addr)}"]
        if self.sel is not None:
            parts.append(f"sel={list(self.sel)}")
        if self.target is not None:
            parts.append(f"target={list(self.target)}")
        if self.dir:
            parts.append(f"dir={self.dir}")
        return " ".join(parts)


@dataclass(frozen=True)
class Script:
    start: Graph = EMPTY
    steps: tuple[ScriptStep, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))


@dataclass(frozen=True)
class ScriptReport:
    ok: bool
    final: Optional[Graph] = None
    step: Optional[int] = None     # 1-based
    rule: str = ""
    addr: Path_ = ()
    reason: str = ""

    def __bool__(self):
        return self.ok

    @property
    def certifies_gev(self) -> bool:
        return self.ok and self.final is not None

    def __str__(self):
        if self.ok:
            return f"ok: {self.final.text()}"
        return f"step {self.step} ({self.rule} at {list(self.addr)}): {self.reason}"


# --- structural helpers ----------------------------------------------------------

def _replace_area(g: Graph, path: Sequence[int], new: Graph) -> Graph:
    if not path:
        return new
    i = path[0]
    n = g.nodes[i]
    if not isinstance(n, Cut):
        raise RuleError(f"address passes through atom {n}")
    inner = _replace_area(n.area, path[1:], new)
    return Graph(g.nodes[:i] + (Cut(n.kind, inner),) + g.nodes[i + 1:])


def _area(g: Graph, path: Sequence[int]) -> Graph:
    try:
        return area_at(g, path)
    except IndexError as exc:
        raise RuleError(str(exc)) from None


def _node(g: Graph, path: Sequence[int]) -> Node:
    try:
        return node_at(g, path)
    except IndexError as exc:
        raise RuleError(str(exc)) from None


def _parity_of_area(g: Graph, path: Sequence[int]) -> bool:
    """True for even."""
    try:
        return area_region(g, path).even
    except IndexError as exc:
        raise RuleError(str(exc)) from None


def _selection(g: Graph, step: ScriptStep) -> tuple[Path_, tuple[int, ...]]:
    if step.sel is not None:
        area = _area(g, step.addr)
        idx = tuple(sorted(set(step.sel)))
        if len(idx) != len(step.sel) or any(not 0 <= i < len(area.nodes) for i in idx):
            raise RuleError(f"bad selection {list(step.sel)}")
        return step.addr, idx
    if not step.addr:
        return (), tuple(range(len(g.nodes)))
    _node(g, step.addr)
    return step.addr[:-1], (step.addr[-1],)


def _picked(area: Graph, idx: Sequence[int]) -> Graph:
    return Graph(tuple(area.nodes[i] for i in idx))


def _without(area: Graph, idx: Sequence[int]) -> list[Node]:
    drop = set(idx)
    return [n for i, n in enumerate(area.nodes) if i not in drop]


def _wrap(g: Graph, path: Path_, idx: Sequence[int], make) -> Graph:
    area = _area(g, path)
    rest = _without(area, idx)
    pos = min(idx) if idx else len(rest)
    rest.insert(pos, make(_picked(area, idx)))
    return _replace_area(g, path, Graph(tuple(rest)))


def _splice(g: Graph, path: Path_, inner: Graph) -> Graph:
    """Replace the node at ``path`` by the nodes of ``inner``."""
    area_path, i = path[:-1], path[-1]
    area = _area(g, area_path)
    nodes = area.nodes[:i] + inner.nodes + area.nodes[i + 1:]
    return _replace_area(g, area_path, Graph(nodes))


def _double(n: Node, outer: str, inner: str) -> Optional[Graph]:
    """Content X if ``n`` is outer-cut(inner-cut(X)) with nothing else inside."""
    if isinstance(n, Cut) and n.kind == outer and len(n.area.nodes) == 1:
        m = n.area.nodes[0]
        if isinstance(m, Cut) and m.kind == inner:
            return m.area
    return None


def _multiset(nodes) -> Counter:
    return Counter(n.canonical() if isinstance(n, Cut) else str(n) for n in nodes)


def _check_path(g: Graph, src_area: Path_, src_idx: Sequence[int],
                target: Path_, classical_only: bool) -> None:
    if len(target) <= len(src_area) or tuple(target[:len(src_area)]) != tuple(src_area):
        raise RuleError("target area must lie inside a cut next to the source")
    if target[len(src_area)] in src_idx:
        raise RuleError("target lies inside the copied part itself")
    _area(g, target)
    passed = cuts_on(g, target)[len(src_area):]
    if classical_only and any(not c.classical for c in passed):
        raise RuleError("a cut between source and target is paracomplete")


def _witness_final(step: ScriptStep) -> Graph:
    if step.witness is None:
        raise RuleError("DCMGEV needs a witness script")
    if not step.witness.start.is_empty:
        raise RuleError("witness script must start from the empty graph")
    rep = check_script(step.witness)
    if not rep:
        raise RuleError(f"witness script fails: {rep}")
    return rep.final


# --- primitive rules -------------------------------------------------------------

def _apply_primitive(g: Graph, s: ScriptStep) -> Graph:
    r = s.rule
    if r == "Rλ":
        if not g.is_empty:
            raise RuleError("Rλ only asserts the empty sheet")
        return g

    if r == "E":
        if s.payload is None:
            raise RuleError("E needs a payload")
        area = _area(g, s.addr)
        if _parity_of_area(g, s.addr):
            raise RuleError("E writes only in odd areas")
        return _replace_area(g, s.addr, area + s.payload)

    if r in ("B", "I", "D", "DCC-in", "DCMGEV-in") or (r == "DCMF" and s.sel is not None):
        path, idx = _selection(g, s)
        area = _area(g, path)
        even = _parity_of_area(g, path)
        x = _picked(area, idx)
        if r == "B":
            if not even:
                raise RuleError("B erases only in even areas")
            return _replace_area(g, path, Graph(tuple(_without(area, idx))))
        if r == "I":
            nodes = list(area.nodes)
            at = max(idx) + 1 if idx else len(nodes)
            nodes[at:at] = x.nodes
            return _replace_area(g, path, Graph(tuple(nodes)))
        if r == "D":
            rest = _multiset(_without(area, idx))
            if _multiset(x.nodes) - rest:
                raise RuleError("no other copy of the selection in this area")
            return _replace_area(g, path, Graph(tuple(_without(area, idx))))
        if r == "DCC-in":
            return _wrap(g, path, idx, lambda y: Cut(CLASSICAL, Graph((Cut(CLASSICAL, y),))))
        if r == "DCMGEV-in":
            if _witness_final(s) != x:
                raise RuleError("witness does not derive the wrapped graph")
            return _wrap(g, path, idx, lambda y: Cut(PARACOMPLETE, Graph((Cut(CLASSICAL, y),))))
        # DCMF with an explicit selection: even direction only
        if not even:
            raise RuleError("DCMF wraps only in even areas")
        if not is_alternate_graph(x):
            raise RuleError("DCMF needs an alternate graph")
        return _wrap(g, path, idx, lambda y: Cut(PARACOMPLETE, Graph((Cut(CLASSICAL, y),))))

    if r in ("DCC-out", "CC", "DCMGEV-out", "DCMF"):
        if not s.addr:
            raise RuleError(f"{r} needs the address of a cut")
        n = _node(g, s.addr)
        even = region_info(g, s.addr).even
        if r == "DCC-out":
            inner = _double(n, CLASSICAL, CLASSICAL)
            if inner is None:
                raise RuleError("not a double classical cut")
            return _splice(g, s.addr, inner)
        if r == "CC":
            if not isinstance(n, Cut):
                raise RuleError("CC needs a cut")
            if even and n.kind != PARACOMPLETE:
                raise RuleError("in even regions CC turns [X] into (X)")
            if not even and n.kind != CLASSICAL:
                raise RuleError("in odd regions CC turns (X) into [X]")
            kind = CLASSICAL if even else PARACOMPLETE
            return _splice(g, s.addr, Graph((Cut(kind, n.area),)))
        if r == "DCMGEV-out":
            inner = _double(n, PARACOMPLETE, CLASSICAL)
            if inner is None:
                raise RuleError("not of the form [(X)]")
            if _witness_final(s) != inner:
                raise RuleError("witness does not derive the unwrapped graph")
            return _splice(g, s.addr, inner)
        # DCMF at a node address
        if even:
            if not is_alternate_graph(Graph((n,))):
                raise RuleError("DCMF needs an alternate graph")
            return _splice(g, s.addr, Graph((Cut(PARACOMPLETE, Graph((Cut(CLASSICAL, Graph((n,))),))),)))
        inner = _double(n, PARACOMPLETE, CLASSICAL)
        if inner is None or not is_alternate_graph(inner):
            raise RuleError("odd DCMF removes [( )] around an alternate graph")
        return _splice(g, s.addr, inner)

    if r in ("IC", "IF", "DC", "DF"):
        path, idx = _selection(g, s)
        area = _area(g, path)
        x = _picked(area, idx)
        if not idx:
            raise RuleError(f"{r} needs a non-empty source")
        if r in ("IF", "DF") and not is_alternate_graph(x):
            raise RuleError(f"{r} copies only alternate graphs")
        if s.target is None:
            raise RuleError(f"{r} needs a target area")
        _check_path(g, path, idx, s.target, classical_only=r in ("IC", "DC"))
        tgt = _area(g, s.target)
        if r in ("IC", "IF"):
            return _replace_area(g, s.target, tgt + x)
        tsel = s.target_sel
        if tsel is None or not tsel:
            raise RuleError(f"{r} needs target_sel naming the copy to remove")
        tsel = tuple(sorted(set(tsel)))
        if any(not 0 <= i < len(tgt.nodes) for i in tsel):
            raise RuleError("bad target selection")
        if _multiset(_picked(tgt, tsel).nodes) != _multiset(x.nodes):
            raise RuleError("target selection is not a copy of the source")
        return _replace_area(g, s.target, Graph(tuple(_without(tgt, tsel))))

    raise RuleError(f"{r} is not a primitive rule")


# --- derived rules -----------------------------------------------------------------

_LAMBDA_WITNESS = Script(EMPTY, ())


def _st(rule, addr, **kw) -> ScriptStep:
    return ScriptStep(rule, tuple(addr), **kw)


def _node_target(g: Graph, s: ScriptStep) -> tuple[Path_, Node]:
    """Node address for derived rules acting on a single node."""
    path, idx = _selection(g, s)
    if len(idx) != 1:
        raise RuleError(f"{s.rule} acts on a single node")
    addr = path + (idx[0],)
    return addr, _node(g, addr)


def expand_derived(s: ScriptStep, g: Graph) -> list[ScriptStep]:
    """One layer of expansion; the result may still contain derived steps."""
    r = s.rule
    if r == "DCCλ":
        return [_st("DCC-in", s.addr, sel=())]
    if r == "DCMλ":
        return [_st("DCMGEV-in", s.addr, sel=(), witness=_LAMBDA_WITNESS)]
    if r == "CCE":
        addr, n = _node_target(g, s)
        parent = _node(g, addr[:-1]) if len(addr) > 1 else None
        if not (isinstance(parent, Cut) and parent.kind == PARACOMPLETE and isinstance(n, Cut)):
            raise RuleError("CCE changes a cut sitting directly inside [ ]")
        return [_st("CC", addr)]

    addr, n = _node_target(g, s)
    even = region_info(g, addr).even
    if r == "DCM":
        if even:
            if _double(n, PARACOMPLETE, CLASSICAL) is None:
                raise RuleError("even DCM removes [( )]")
            return [_st("CC", addr), _st("DCC-out", addr)]
        return [_st("DCC-in", addr), _st("CC", addr)]
    if r in ("DCMF.1", "TCM"):
        if r == "TCM" and not (isinstance(n, Cut) and n.kind == PARACOMPLETE):
            raise RuleError("TCM acts on [X]")
        way = _direction(s, n, PARACOMPLETE, CLASSICAL)
        x = _double(n, PARACOMPLETE, CLASSICAL) if way == "out" else Graph((n,))
        if r == "TCM" and way == "out":
            inner = _double(n, PARACOMPLETE, CLASSICAL)
            if inner is None or not is_alternate_graph(inner):
                raise RuleError("TCM removes ( ) from [([X])]")
        if x is None or not is_alternate_graph(x):
            raise RuleError(f"{r} needs an alternate graph")
        if way == "out":
            return [_st("DCM", addr)] if even else [_st("DCMF", addr)]
        return [_st("DCMF", addr)] if even else [_st("DCM", addr)]
    if r in ("DCAF", "TCA"):
        if r == "TCA" and not (even and isinstance(n, Cut) and n.kind == PARACOMPLETE) \
                and not (not even and _triple(n) is not None):
            raise RuleError("TCA acts on [X] (even) or [[[X]]] (odd)")
        if even:
            if not is_alternate_graph(Graph((n,))):
                raise RuleError("DCAF needs an alternate graph")
            return [_st("DCMF", addr), _st("CC", addr + (0,))]
        x = _double(n, PARACOMPLETE, PARACOMPLETE)
        if x is None or not is_alternate_graph(x):
            raise RuleError("odd DCAF removes [[ ]] around an alternate graph")
        return [_st("CC", addr + (0,)), _st("DCMF", addr)]
    if r == "TCAF":
        if even:
            x = _triple(n)
            if x is None or not is_alternate_graph(x):
                raise RuleError("even TCAF turns [[[X]]] into [X] for alternate X")
            return [
                _st("E", addr, payload=x),
                _st("IF", addr + (1,), target=addr + (0,)),
                _st("DF", addr + (0, 1), target=addr + (0, 0), target_sel=(0,)),
                _st("B", addr + (0, 1)),
                _st("CC", addr + (0, 0)),
                _st("DCMGEV-out", addr + (0,), witness=_LAMBDA_WITNESS),
            ]
        if not (isinstance(n, Cut) and n.kind == PARACOMPLETE and is_alternate_graph(n.area)):
            raise RuleError("odd TCAF turns [X] into [[[X]]] for alternate X")
        x = n.area
        return [
            _st("DCMGEV-in", addr, sel=(), witness=_LAMBDA_WITNESS),
            _st("CC", addr + (1, 0)),
            _st("E", addr + (1,), payload=x),
            _st("IF", addr + (1, 1), target=addr + (1, 0)),
            _st("DF", addr + (0,), target=addr + (1,), target_sel=(1,)),
            _st("B", addr + (0,)),
        ]
    if r in ("TCAF.1", "CCA"):
        way = s.dir or ("out" if _triple(n) is not None and r == "TCAF.1"
                        or r == "CCA" and _quad(n) is not None else "in")
        if r == "CCA":
            ok = _quad(n) is not None if way == "out" else _double(n, PARACOMPLETE, PARACOMPLETE) is not None
            if not ok:
                raise RuleError("CCA relates [[[[X]]]] and [[X]]")
            return [_st("TCAF.1", addr, dir=way)]
        if way == "out":
            if _triple(n) is None:
                raise RuleError("TCAF.1 removes two cuts from [[[X]]]")
            return [_st("TCAF" if even else "TCA", addr)]
        if not (isinstance(n, Cut) and n.kind == PARACOMPLETE):
            raise RuleError("TCAF.1 adds two cuts to [X]")
        return [_st("TCA" if even else "TCAF", addr)]
    raise RuleError(f"{r} is not a derived rule")


def _direction(s: ScriptStep, n: Node, outer: str, inner: str) -> str:
    if s.dir:
        return s.dir
    return "out" if _double(n, outer, inner) is not None else "in"


def _triple(n: Node) -> Optional[Graph]:
    x = _double(n, PARACOMPLETE, PARACOMPLETE)
    if x is None or len(x.nodes) != 1:
        return None
    m = x.nodes[0]
    return m.area if isinstance(m, Cut) and m.kind == PARACOMPLETE else None


def _quad(n: Node) -> Optional[Graph]:
    x = _triple(n)
    if x is None or len(x.nodes) != 1:
        return None
    m = x.nodes[0]
    return m.area if isinstance(m, Cut) and m.kind == PARACOMPLETE else None


def apply_rule(g: Graph, step: ScriptStep) -> Graph:
    """Apply one step (primitive, or derived via its expansion)."""
    if step.rule in PRIMITIVE_RULES:
        return _apply_primitive(g, step)
    for sub in expand_derived(step, g):
        g = apply_rule(g, sub)
    return g


def expand_fully(step: ScriptStep, g: Graph) -> list[ScriptStep]:
    """Primitive steps realizing ``step`` on ``g``."""
    if step.rule in PRIMITIVE_RULES:
        return [step]
    out = []
    for sub in expand_derived(step, g):
        prim = expand_fully(sub, g)
        for p in prim:
            g = _apply_primitive(g, p)
        out += prim
    return out


def check_script(s: Script) -> ScriptReport:
    g = s.start
    for k, step in enumerate(s.steps, 1):
        try:
            g = apply_rule(g, step)
        except RuleError as exc:
            return ScriptReport(False, None, k, step.rule, step.addr, str(exc))
    return ScriptReport(True, g)


# --- semantics of rules ----------------------------------------------------------

def check_rule_soundness(before: Graph, after: Graph, bound: int = 3,
                         extra_atoms: Sequence[Atom] = ()) -> bool:
    """Whenever ``before`` holds at the actual world, so does ``after``.

    Checked on every model with up to ``bound`` worlds over the atoms of both
    graphs.
    """
    atoms = sorted(set(atoms_of_graph(before)) | set(atoms_of_graph(after)) | set(extra_atoms),
                   key=lambda a: (a.alternate, a.name))
    classical = [a for a in atoms if not a.alternate]
    alternate = [a for a in atoms if a.alternate]
    batch = all_models(bound, classical, alternate)
    b = graph_truth(batch, before) & batch.actual
    a = graph_truth(batch, after) & batch.actual
    return bool(((b != 0) <= (a != 0)).all())


# --- file format -------------------------------------------------------------------

def _step_to_json(st: ScriptStep, witness_names: Optional[dict] = None) -> dict:
    rec: dict = {"rule": st.rule, "addr": list(st.addr)}
    if st.sel is not None:
        rec["sel"] = list(st.sel)
    if st.payload is not None:
        rec["payload"] = st.payload.text()
    if st.target is not None:
        rec["target"] = list(st.target)
    if st.target_sel is not None:
        rec["target_sel"] = list(st.target_sel)
    if st.dir is not None:
        rec["dir"] = st.dir
    if st.witness is not None:
        name = (witness_names or {}).get(id(st.witness))
        rec["witness"] = name if name else _script_to_obj(st.witness)
    return rec


def _script_to_obj(s: Script) -> dict:
    return {"start": s.start.text(), "steps": [_step_to_json(st) for st in s.steps]}


def script_to_jsonl(s: Script, witness_names: Optional[dict] = None) -> str:
    lines = [json.dumps({"start": s.start.text()}, ensure_ascii=False)]
    lines += [json.dumps(_step_to_json(st, witness_names), ensure_ascii=False) for st in s.steps]
    return "\n".join(lines) + "\n"


def _step_from_json(rec: dict, base: Optional[Path]) -> ScriptStep:
    w = rec.get("witness")
    if isinstance(w, str):
        path = Path(w) if base is None else base / w
        w = load_script(path)
    elif isinstance(w, dict):
        w = Script(parse_graph(w.get("start", "")),
                   tuple(_step_from_json(r, base) for r in w.get("steps", [])))
    payload = rec.get("payload")
    return ScriptStep(
        rec["rule"], tuple(rec.get("addr", ())),
        sel=tuple(rec["sel"]) if "sel" in rec else None,
        payload=parse_graph(payload) if payload is not None else None,
        target=tuple(rec["target"]) if "target" in rec else None,
        target_sel=tuple(rec["target_sel"]) if "target_sel" in rec else None,
        witness=w, dir=rec.get("dir"))


def script_from_jsonl(text: str, base: Optional[Path] = None) -> Script:
    records = [json.loads(l) for l in text.splitlines() if l.strip()]
    start = EMPTY
    if records and "rule" not in records[0]:
        start = parse_graph(records.pop(0).get("start", ""))
    return Script(start, tuple(_step_from_json(r, base) for r in records))


def load_script(path) -> Script:
    path = Path(path)
    return script_from_jsonl(path.read_text(encoding="utf-8"), path.parent)


def save_script(s: Script, path, witness_names: Optional[dict] = None) -> None:
    Path(path).write_text(script_to_jsonl(s, witness_names), encoding="utf-8")
