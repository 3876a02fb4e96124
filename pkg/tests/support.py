"""Shared helpers for the test suite: formula pools and truth-set bookkeeping.

Several checks quantify over every formula up to some depth.  Enumerating
those formulas one by one is out of reach, so the helpers work with the
truth sets formulas can take instead.  Each connective's truth set depends
only on the frame and the truth sets of its arguments, so the collection of
truth sets realised at depth d+1 in a model is determined by the frame and
the collection realised at depth d.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator

import numpy as np

from doublelogic.batch import ModelBatch
from doublelogic.formula import (ABin, ANeg, Atom, CBin, CNeg, Derived, Formula,
                                 atom)

CLASSICAL_OPS = ("impl", "or", "and", "iff")
DERIVED_OPS = ("plus", "circ", "minus", "star")
UNARY_KINDS = ("cneg", "aneg") + DERIVED_OPS


def apply_unary(batch: ModelBatch, kind: str, x):
    if kind == "cneg":
        return batch.cneg(x)
    if kind == "aneg":
        return batch.aneg(x)
    box = batch.box(x)
    if kind == "plus":
        return box
    if kind == "circ":
        return batch.cneg(batch.aneg(x))
    if kind == "minus":
        return batch.cneg(box)
    return batch.aneg(x) | box


def apply_binary(batch: ModelBatch, alternate: bool, op: str, x, y):
    out = batch.binary(op, x, y)
    return batch.box(out) if alternate else out


BINARY_KINDS = tuple((alt_, op) for alt_ in (False, True) for op in CLASSICAL_OPS)


def make_unary(kind: str, x: Formula) -> Formula:
    if kind == "cneg":
        return CNeg(x)
    if kind == "aneg":
        return ANeg(x)
    return Derived(kind, x)


def make_binary(alternate: bool, op: str, x: Formula, y: Formula) -> Formula:
    return ABin(op, x, y) if alternate else CBin(op, x, y)


def formulas_upto(atoms: Iterable[Atom], depth: int,
                  unary=UNARY_KINDS, binary=BINARY_KINDS) -> list[Formula]:
    """Every formula over ``atoms`` of depth at most ``depth``."""
    pool = list(atoms)
    for _ in range(depth):
        nxt = list(pool)
        seen = set(pool)
        for x in pool:
            for k in unary:
                g = make_unary(k, x)
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        for x, y in itertools.product(pool, repeat=2):
            for alt_, op in binary:
                g = make_binary(alt_, op, x, y)
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        pool = nxt
    return pool


def random_formula(rng: random.Random, atoms, depth: int,
                   unary=UNARY_KINDS, binary=BINARY_KINDS, leaf_p: float = 0.25) -> Formula:
    if depth == 0 or rng.random() < leaf_p:
        return rng.choice(list(atoms))
    if unary and (not binary or rng.random() < 0.3):
        return make_unary(rng.choice(unary), random_formula(rng, atoms, depth - 1, unary, binary, leaf_p))
    alt_, op = rng.choice(binary)
    return make_binary(alt_, op,
                       random_formula(rng, atoms, depth - 1, unary, binary, leaf_p),
                       random_formula(rng, atoms, depth - 1, unary, binary, leaf_p))


# --- realised truth sets ------------------------------------------------------------

def _mask_set(bits: int) -> tuple[int, ...]:
    return tuple(m for m in range(bits.bit_length()) if (bits >> m) & 1)


def depth1_signatures(batch: ModelBatch, atoms: list[Atom]) -> np.ndarray:
    """Per model, the set of truth sets of depth-≤1 formulas as a bit set."""
    cols = [batch.atoms[a] for a in atoms]
    masks = list(cols)
    for x in cols:
        masks += [apply_unary(batch, k, x) for k in UNARY_KINDS]
    for x, y in itertools.product(cols, repeat=2):
        masks += [apply_binary(batch, a, op, x, y) for a, op in BINARY_KINDS]
    sig = np.zeros(len(batch), dtype=np.int64)
    for m in masks:
        sig |= np.left_shift(1, m)
    return sig


def _single(table) -> ModelBatch:
    return ModelBatch([table], np.zeros(1, dtype=np.int64), {})


def next_level(table, masks: tuple[int, ...]) -> tuple[set[int], set[int]]:
    """Truth sets one level up on one frame, and the alternate ones among them.

    The alternate ones are those of formulas whose desugared form starts with
    ¬ (alternate negations, +, and the alternate binaries).
    """
    b = _single(table)
    arr = lambda v: np.array([v], dtype=np.int64)  # noqa: E731
    out, alt_out = set(masks), set()
    for x in masks:
        for k in UNARY_KINDS:
            v = int(apply_unary(b, k, arr(x))[0])
            out.add(v)
            if k in ("aneg", "plus"):
                alt_out.add(v)
    for x, y in itertools.product(masks, repeat=2):
        for a, op in BINARY_KINDS:
            v = int(apply_binary(b, a, op, arr(x), arr(y))[0])
            out.add(v)
            if a:
                alt_out.add(v)
    return out, alt_out


def depth2_classes(batch: ModelBatch, atoms: list[Atom], alternate_atoms: list[Atom]):
    """Group models by what depth-≤2 formulas can say about them.

    Returns ``(index, classes)``: ``index[i]`` is the class of model ``i`` and
    ``classes[k] = (frame index, depth-≤2 truth sets, FA truth sets)``.  FA
    formulas of depth ≤ 2 are the alternate atoms plus the formulas whose
    outermost desugared connective is ¬ applied to a depth-≤1 formula.
    """
    sig = depth1_signatures(batch, atoms)
    alt_sig = np.zeros(len(batch), dtype=np.int64)
    for a in alternate_atoms:
        alt_sig |= np.left_shift(1, batch.atoms[a])
    keys, index = np.unique(np.stack([batch.frame_ids, sig, alt_sig], axis=1), axis=0,
                            return_inverse=True)
    classes = []
    for fid, s, a in keys:
        d2, fa = next_level(batch.tables[int(fid)], _mask_set(int(s)))
        fa |= set(_mask_set(int(a)))
        classes.append((int(fid), frozenset(d2), frozenset(fa)))
    return index.reshape(-1), classes


def placeholder_atoms(names: Iterable[str]) -> dict[str, Atom]:
    """Fresh classical atoms standing for schema variables (any truth set allowed)."""
    return {n: atom(f"p{n.lower()}") for n in names}


def tuples_batch(table, placeholders: list[Atom], tuples: Iterable[tuple[int, ...]]) -> ModelBatch:
    rows = np.array(sorted(set(tuples)), dtype=np.int64).reshape(-1, len(placeholders))
    return ModelBatch([table], np.zeros(len(rows), dtype=np.int64),
                      {p: rows[:, i] for i, p in enumerate(placeholders)})


def iter_tuples(choices: Iterable[tuple[int, ...]], k: int) -> Iterator[tuple[int, ...]]:
    for c in choices:
        yield from itertools.product(c, repeat=k)


# --- graph corpora ---------------------------------------------------------------

def small_graphs(atoms, depth: int, width: int = 2):
    """Graphs up to cut depth ``depth`` with at most ``width`` nodes per area."""
    from doublelogic.graphs.core import CLASSICAL, PARACOMPLETE, Cut, Graph

    nodes = list(atoms)
    if depth > 0:
        nodes += [Cut(k, g) for k in (CLASSICAL, PARACOMPLETE)
                  for g in small_graphs(atoms, depth - 1, width)]
    out = {Graph(())}
    for k in range(1, width + 1):
        for combo in itertools.combinations_with_replacement(nodes, k):
            out.add(Graph(combo))
    return sorted(out, key=lambda g: g.canonical())


def graph_corpus(seed: int = 7, extra: int = 200):
    """Every depth-≤1 graph over a, _a plus a seeded sample of depth-2 ones."""
    from doublelogic.formula import alt, atom

    atoms = [atom("a"), alt("a")]
    shallow = small_graphs(atoms, 1)
    deep = [g for g in small_graphs(atoms, 2) if g not in set(shallow)]
    return shallow + random.Random(seed).sample(deep, extra)


def derived_applications(g):
    """Every derived-rule step at a node (or empty selection) that applies to ``g``."""
    from doublelogic.graphs.rules import DERIVED_RULES, RuleError, ScriptStep, apply_rule
    from doublelogic.graphs.search import areas

    for path, area in areas(g):
        for r in DERIVED_RULES:
            if r in ("DCCλ", "DCMλ"):
                steps = [ScriptStep(r, path, sel=())]
            else:
                steps = [ScriptStep(r, path + (i,), dir=d)
                         for i in range(len(area.nodes)) for d in (None, "in", "out")]
            for st in steps:
                try:
                    yield st, apply_rule(g, st)
                except (RuleError, IndexError):
                    continue
