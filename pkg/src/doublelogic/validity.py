"""Bounded validity by exhaustive countermodel search, plus fragment oracles.

``decide`` walks every poset frame with up to ``max_worlds`` worlds and every
valuation of the formula's atoms, in a fixed order, and returns the first
model whose actual world falsifies the formula.  "Valid" therefore always
means "no countermodel within the bound".
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .batch import (ModelBatch, frame_table, valuation_batch, valuation_count)
from .formula import (ANeg, Atom, CNeg, Formula, atoms_of, fragment_of)
from .kripke import Frame, Model, world_index

__all__ = ["Verdict", "VALID", "COUNTERMODEL", "UNKNOWN", "POSET_CAP",
           "enumerate_posets", "decide", "classical_oracle",
           "intuitionistic_eval", "intuitionistic_truth", "all_models"]

VALID, COUNTERMODEL, UNKNOWN = "Valid", "CounterModel", "Unknown"
POSET_CAP = 4
CHUNK = 1 << 16


@dataclass(frozen=True)
class Verdict:
    tag: str
    bound: int
    witness: Optional[Model] = None
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.tag == VALID

    def __str__(self):
        if self.tag == COUNTERMODEL:
            return f"CounterModel ({self.witness.frame.size} worlds)"
        if self.tag == UNKNOWN:
            return f"Unknown (bound {self.bound}: {self.reason})"
        return f"Valid (no countermodel with <= {self.bound} worlds)"


def world_names(n: int) -> tuple[str, ...]:
    return ("MA",) + tuple(f"M{i}" for i in range(1, n))


@lru_cache(maxsize=None)
def _posets(n: int) -> tuple[Frame, ...]:
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    diag = {(i, i) for i in range(n)}
    out = []
    # Off-diagonal positions are listed in row-major order, so counting up
    # through them walks the full relation bitmasks in increasing order.
    for bits in range(1 << len(off)):
        rel = diag | {off[k] for k in range(len(off)) if (bits >> k) & 1}
        if any((b, a) in rel for a, b in rel if a != b):
            continue
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c):
            continue
        out.append(Frame(world_names(n), 0, frozenset(rel)))
    return tuple(out)


def enumerate_posets(n: int, cap: int = POSET_CAP) -> Iterator[Frame]:
    """All labeled partial orders on ``n`` worlds, actual world 0."""
    if n < 1:
        raise ValueError("a frame needs at least one world")
    if n > cap:
        raise ValueError(f"{n} worlds exceeds the enumeration cap {cap}")
    return iter(_posets(n))


def _first_failure(frame: Frame, f: Formula, classical, alternate,
                   limit: int) -> tuple[Optional[Model], int]:
    """First falsifying valuation on one frame and the number of models tried."""
    table = frame_table(frame)
    total = min(valuation_count(table, classical, alternate), limit)
    for start in range(0, total, CHUNK):
        batch = valuation_batch(table, classical, alternate, start, min(start + CHUNK, total))
        bad = np.flatnonzero(~batch.holds_at_actual(f))
        if len(bad):
            return batch.model(int(bad[0])), start + int(bad[0]) + 1
    return None, total


def decide(f: Formula, max_worlds: int = 3, *, max_atoms: Optional[int] = None,
           max_models: Optional[int] = None, workers: int = 1) -> Verdict:
    """Search for a countermodel with at most ``max_worlds`` worlds.

    ``max_atoms`` caps the distinct atoms of each kind and ``max_models`` the
    number of valuations examined; exceeding either gives an Unknown verdict.
    With ``workers > 1`` frames of one size are searched in parallel, and the
    witness is still the first one in enumeration order.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    atoms = atoms_of(f)
    classical = [a for a in atoms if not a.alternate]
    alternate = [a for a in atoms if a.alternate]
    if max_atoms is not None and max(len(classical), len(alternate)) > max_atoms:
        return Verdict(UNKNOWN, 0, reason=f"more than {max_atoms} atoms of one kind")
    budget = max_models if max_models is not None else float("inf")
    cap = max(POSET_CAP, max_worlds)
    for n in range(1, max_worlds + 1):
        frames = list(enumerate_posets(n, cap))
        if max_models is not None:
            need = sum(valuation_count(frame_table(fr), classical, alternate) for fr in frames)
            if need > budget:
                return Verdict(UNKNOWN, n, reason=f"model budget exhausted at {n} worlds")
        limit = int(min(budget, 1 << 62))
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(
                    lambda fr: _first_failure(fr, f, classical, alternate, limit), frames))
        else:
            results = []
            for fr in frames:
                results.append(_first_failure(fr, f, classical, alternate, limit))
                if results[-1][0] is not None:
                    break
        for witness, used in results:
            if witness is not None:
                return Verdict(COUNTERMODEL, n, witness)
            budget -= used
    return Verdict(VALID, max_worlds)


def classical_oracle(f: Formula) -> bool:
    """Truth-table tautology check for formulas of the classical fragment."""
    if not fragment_of(f).in_fc:
        raise ValueError("classical_oracle needs a formula built from ∼, •, ∪, ⊃, ≡ "
                         "and classical atoms")
    atoms = atoms_of(f)

    def ev(g, row):
        if isinstance(g, Atom):
            return row[g]
        if isinstance(g, CNeg):
            return not ev(g.arg, row)
        x, y = ev(g.left, row), ev(g.right, row)
        return {"and": x and y, "or": x or y, "impl": (not x) or y, "iff": x == y}[g.op]

    return all(ev(f, dict(zip(atoms, row)))
               for row in itertools.product((False, True), repeat=len(atoms)))


def _check_fi(f: Formula) -> None:
    if not fragment_of(f).in_fi:
        raise ValueError("intuitionistic evaluation needs a formula built from "
                         "¬, ∧, ∨, →, ↔ and alternate atoms")


def intuitionistic_eval(m: Model, w, f: Formula) -> int:
    """Kripke semantics of intuitionistic logic, read with alternate atoms."""
    _check_fi(f)
    n = m.frame.size
    succ = [m.frame.successors(v) for v in range(n)]
    memo: dict = {}

    def ev(v, g):
        key = (v, g)
        if key in memo:
            return memo[key]
        if isinstance(g, Atom):
            r = m.value(v, g)
        elif isinstance(g, ANeg):
            r = int(all(not ev(u, g.arg) for u in succ[v]))
        elif g.op == "and":
            r = ev(v, g.left) & ev(v, g.right)
        elif g.op == "or":
            r = ev(v, g.left) | ev(v, g.right)
        elif g.op == "impl":
            r = int(all(not ev(u, g.left) or ev(u, g.right) for u in succ[v]))
        else:
            r = int(all(ev(u, g.left) == ev(u, g.right) for u in succ[v]))
        memo[key] = r
        return r

    return ev(world_index(m, w), f)


def intuitionistic_truth(batch: ModelBatch, f: Formula, memo=None) -> np.ndarray:
    """Batch form of :func:`intuitionistic_eval`: truth masks per model."""
    _check_fi(f)
    memo = {} if memo is None else memo

    def ev(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            out = batch.atoms[g]
        elif isinstance(g, ANeg):
            out = batch.aneg(ev(g.arg))
        elif g.op == "and":
            out = ev(g.left) & ev(g.right)
        elif g.op == "or":
            out = ev(g.left) | ev(g.right)
        else:
            out = batch.box(batch.binary(g.op, ev(g.left), ev(g.right)))
        memo[g] = out
        return out

    return ev(f)


def all_models(max_worlds: int, classical: Sequence[Atom],
               alternate: Sequence[Atom] = ()) -> ModelBatch:
    """Every model with 1..max_worlds worlds over the given atoms, in search order."""
    tables, ids, cols = [], [], {a: [] for a in [*classical, *alternate]}
    for n in range(1, max_worlds + 1):
        for fr in enumerate_posets(n, max(POSET_CAP, max_worlds)):
            t = frame_table(fr)
            b = valuation_batch(t, classical, alternate)
            ids.append(np.full(len(b), len(tables)))
            tables.append(t)
            for a in cols:
                cols[a].append(b.atoms[a])
    atoms = {a: np.concatenate(v) for a, v in cols.items()}
    if not cols:
        atoms = {}
    return ModelBatch(tables, np.concatenate(ids), atoms)
