"""Finite Kripke models for LD and their valuation.

A model is a finite partial order of worlds with a designated actual world
and a truth table for every atom.  Classical atoms are unconstrained;
alternate atoms must be inherited by every accessible world.

Worlds are dense indices internally; names are kept for I/O only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .formula import (ANeg, Atom, CBin, CNeg, Formula, Meta, atoms_of, desugar)

__all__ = [
    "Frame", "Model", "Violation", "ModelError", "validate_model",
    "check_model", "evaluate", "evaluate_derived", "is_persistent",
    "truth_set", "model_from_json", "model_to_json", "load_model",
    "model_to_dot", "world_index",
]

World = Union[int, str]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Frame:
    worlds: tuple[str, ...]
    actual: int
    rel: frozenset[tuple[int, int]]

    @classmethod
    def build(cls, worlds: Iterable[str], actual: World,
              pairs: Iterable[tuple[World, World]]) -> Frame:
        """Frame from names; reflexive pairs are added automatically."""
        worlds = tuple(worlds)
        index = {w: i for i, w in enumerate(worlds)}
        if len(index) != len(worlds):
            raise ModelError("duplicate world names")

        def ix(w):
            if isinstance(w, int) and 0 <= w < len(worlds):
                return w
            try:
                return index[w]
            except KeyError:
                raise ModelError(f"unknown world {w!r}") from None

        rel = {(ix(a), ix(b)) for a, b in pairs}
        rel |= {(i, i) for i in range(len(worlds))}
        return cls(worlds, ix(actual), frozenset(rel))

    @property
    def size(self) -> int:
        return len(self.worlds)

    def successors(self, w: int) -> list[int]:
        return [v for v in range(self.size) if (w, v) in self.rel]

    def succ_mask(self, w: int) -> int:
        return sum(1 << v for v in range(self.size) if (w, v) in self.rel)


@dataclass(frozen=True)
class Model:
    frame: Frame
    val: Mapping[Atom, frozenset[int]] = field(default_factory=dict)

    @property
    def val_classical(self) -> dict[Atom, frozenset[int]]:
        return {a: s for a, s in self.val.items() if not a.alternate}

    @property
    def val_alternate(self) -> dict[Atom, frozenset[int]]:
        return {a: s for a, s in self.val.items() if a.alternate}

    def value(self, w: int, a: Atom) -> int:
        try:
            return int(w in self.val[a])
        except KeyError:
            raise ModelError(f"atom {a} has no valuation in this model") from None

    def __hash__(self):
        return hash((self.frame, frozenset(self.val.items())))

    def __eq__(self, other):
        return (isinstance(other, Model) and self.frame == other.frame
                and dict(self.val) == dict(other.val))


@dataclass(frozen=True)
class Violation:
    restriction: str  # "actual", "RR", "RT", "RA" or "heredity"
    worlds: tuple[int, ...]
    atom: Optional[Atom] = None

    def describe(self, frame: Frame) -> str:
        names = ", ".join(frame.worlds[w] if w < frame.size else str(w)
                          for w in self.worlds)
        extra = f" for atom {self.atom}" if self.atom is not None else ""
        return f"{self.restriction} violated at ({names}){extra}"


def validate_model(m: Model) -> Optional[Violation]:
    """None if ``m`` is an LD model, else the first violation found.

    Scan order: actual world, RR, RT, RA, heredity of alternate atoms.
    """
    fr = m.frame
    n = fr.size
    if n < 1 or not 0 <= fr.actual < n:
        return Violation("actual", (fr.actual,))
    for a, b in sorted(fr.rel):
        if not (0 <= a < n and 0 <= b < n):
            return Violation("RR", (a, b))
    for w in range(n):
        if (w, w) not in fr.rel:
            return Violation("RR", (w,))
    for a in range(n):
        for b in range(n):
            if (a, b) not in fr.rel:
                continue
            for c in range(n):
                if (b, c) in fr.rel and (a, c) not in fr.rel:
                    return Violation("RT", (a, b, c))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in fr.rel and (b, a) in fr.rel:
                return Violation("RA", (a, b))
    for at in sorted(m.val, key=lambda x: (x.alternate, x.name)):
        if any(not 0 <= w < n for w in m.val[at]):
            return Violation("heredity" if at.alternate else "actual",
                             tuple(sorted(m.val[at])), at)
        if not at.alternate:
            continue
        for a, b in sorted(fr.rel):
            if a in m.val[at] and b not in m.val[at]:
                return Violation("heredity", (a, b), at)
    return None


def check_model(m: Model) -> Model:
    bad = validate_model(m)
    if bad is not None:
        raise ModelError(bad.describe(m.frame))
    return m


def world_index(m: Model, w: World) -> int:
    if isinstance(w, int):
        if 0 <= w < m.frame.size:
            return w
    elif w in m.frame.worlds:
        return m.frame.worlds.index(w)
    raise ModelError(f"unknown world {w!r}")


class _Evaluator:
    """Per-world recursion over the core connectives, memoised per call."""

    def __init__(self, m: Model):
        self.m = m
        self.succ = [m.frame.successors(w) for w in range(m.frame.size)]
        self.memo: dict[tuple[int, Formula], int] = {}

    def __call__(self, w: int, f: Formula) -> int:
        key = (w, f)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._eval(w, f)
        return hit

    def _eval(self, w: int, f: Formula) -> int:
        if isinstance(f, Atom):
            return self.m.value(w, f)
        if isinstance(f, CNeg):
            return 1 - self(w, f.arg)
        if isinstance(f, ANeg):
            return int(all(self(v, f.arg) == 0 for v in self.succ[w]))
        if isinstance(f, CBin):
            x = self(w, f.left)
            if f.op == "and":
                return x & self(w, f.right)
            if f.op == "or":
                return x | self(w, f.right)
            if f.op == "impl":
                return (1 - x) | self(w, f.right)
            return int(x == self(w, f.right))
        if isinstance(f, Meta):
            raise ModelError(f"cannot evaluate schema variable {f}")
        raise TypeError(f"not a core formula: {f!r}")


def evaluate(m: Model, w: World, f: Formula) -> int:
    """Truth value (0/1) of ``f`` at world ``w``."""
    return _Evaluator(m)(world_index(m, w), desugar(f))


def truth_set(m: Model, f: Formula) -> frozenset[int]:
    ev = _Evaluator(m)
    g = desugar(f)
    return frozenset(w for w in range(m.frame.size) if ev(w, g))


def evaluate_derived(m: Model, w: World, op: str, f: Formula) -> int:
    """Value of +f, ⊗f, −f or *f read off the successors directly."""
    ev = _Evaluator(m)
    g = desugar(f)
    vals = [ev(v, g) for v in ev.succ[world_index(m, w)]]
    if op in ("plus", "+"):
        return int(all(vals))
    if op in ("circ", "?", "⊗"):
        return int(any(vals))
    if op in ("minus", "#", "−"):
        return int(not all(vals))
    if op in ("star", "*"):
        return int(not (any(vals) and not all(vals)))
    raise ValueError(f"unknown derived operator {op!r}")


def is_persistent(m: Model, f: Formula) -> bool:
    ts = truth_set(m, f)
    return all(b in ts for a, b in m.frame.rel if a in ts)


# --- JSON / DOT -------------------------------------------------------------

def _atom_from_name(name: str) -> Atom:
    return Atom(name.lstrip("_"), name.startswith("_"))


def model_from_json(data: Mapping) -> Model:
    """Build and validate a model from the JSON exchange format."""
    try:
        frame = Frame.build(data["worlds"], data["actual"],
                            [tuple(p) for p in data.get("rel", [])])
        table = data.get("val", {})
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model: {exc}") from None
    names = set(frame.worlds)
    if set(table) - names:
        raise ModelError(f"valuation for unknown worlds {sorted(set(table) - names)}")
    atoms = {a for row in table.values() for a in row}
    val = {}
    for name in sorted(atoms):
        a = _atom_from_name(name)
        true = set()
        for i, w in enumerate(frame.worlds):
            row = table.get(w, {})
            if name not in row:
                raise ModelError(f"atom {name} has no value at world {w}")
            if row[name] not in (0, 1, True, False):
                raise ModelError(f"value of {name} at {w} must be 0 or 1")
            if row[name]:
                true.add(i)
        val[a] = frozenset(true)
    return check_model(Model(frame, val))


def model_to_json(m: Model) -> dict:
    fr = m.frame
    atoms = sorted(m.val, key=lambda a: (a.alternate, a.name))
    return {
        "worlds": list(fr.worlds),
        "actual": fr.worlds[fr.actual],
        "rel": [[fr.worlds[a], fr.worlds[b]] for a, b in sorted(fr.rel) if a != b],
        "val": {w: {str(a): int(i in m.val[a]) for a in atoms}
                for i, w in enumerate(fr.worlds)},
    }


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def model_to_dot(m: Model, name: str = "model") -> str:
    fr = m.frame
    atoms = sorted(m.val, key=lambda a: (a.alternate, a.name))
    lines = [f"digraph {name} {{"]
    for i, w in enumerate(fr.worlds):
        vals = " ".join(f"{a}={int(i in m.val[a])}" for a in atoms)
        shape = "doublecircle" if i == fr.actual else "circle"
        lines.append(f'  "{w}" [shape={shape}, label="{w}\\n{vals}"];')
    for a, b in sorted(fr.rel):
        if a != b:
            lines.append(f'  "{fr.worlds[a]}" -> "{fr.worlds[b]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def model_for(frame: Frame, val: Mapping[Atom, Iterable[int]]) -> Model:
    return Model(frame, {a: frozenset(s) for a, s in val.items()})


def needed_atoms(f: Formula) -> list[Atom]:
    return atoms_of(f)
