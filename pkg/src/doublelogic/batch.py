"""Vectorised evaluation over many models at once.

Every truth set is a bitmask over the worlds of its frame (bit ``i`` set
means true at world ``i``).  A batch holds one mask per model for each atom,
so evaluating a formula costs one numpy operation per connective no matter
how many models are in the batch.  ¬ goes through a per-frame lookup table
indexed by the mask of its argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .formula import ANeg, Atom, CBin, CNeg, Formula, Meta, desugar
from .kripke import Frame, Model, ModelError

__all__ = ["FrameTable", "ModelBatch", "frame_table", "valuation_count",
           "valuation_batch", "batch_from_models", "mask_to_set"]


@dataclass(frozen=True, eq=False)
class FrameTable:
    frame: Frame
    full: int
    succ: tuple[int, ...]
    neg: np.ndarray       # neg[m] = worlds none of whose successors lie in m
    upsets: np.ndarray    # up-closed masks, ascending

    @property
    def size(self) -> int:
        return self.frame.size


@lru_cache(maxsize=4096)
def frame_table(frame: Frame) -> FrameTable:
    n = frame.size
    succ = tuple(frame.succ_mask(w) for w in range(n))
    masks = np.arange(1 << n, dtype=np.int64)
    neg = np.zeros(1 << n, dtype=np.int64)
    for w, s in enumerate(succ):
        neg |= np.where(masks & s == 0, 1 << w, 0)
    ups = [m for m in range(1 << n)
           if all(not (m >> w) & 1 or (s & ~m) == 0 for w, s in enumerate(succ))]
    return FrameTable(frame, (1 << n) - 1, succ, neg, np.array(ups, dtype=np.int64))


def mask_to_set(mask: int) -> frozenset[int]:
    mask = int(mask)
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


class ModelBatch:
    """A flat collection of models, possibly over different frames.

    ``atoms`` maps each atom to an int64 array holding its truth mask in every
    model.  The same index addresses the same model in every array.
    """

    def __init__(self, tables: Sequence[FrameTable], frame_ids: np.ndarray,
                 atoms: Mapping[Atom, np.ndarray]):
        self.tables = list(tables)
        self.frame_ids = np.asarray(frame_ids, dtype=np.int64)
        width = 1 << max(t.size for t in self.tables)
        lut = np.zeros((len(self.tables), width), dtype=np.int64)
        for i, t in enumerate(self.tables):
            lut[i, :len(t.neg)] = t.neg
        self._lut = lut
        self.full = np.array([t.full for t in self.tables], dtype=np.int64)[self.frame_ids]
        self.actual = np.array([1 << t.frame.actual for t in self.tables],
                               dtype=np.int64)[self.frame_ids]
        self.atoms = dict(atoms)
        self._memo: dict[Formula, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.frame_ids)

    # primitive operations on mask arrays
    def cneg(self, x: np.ndarray) -> np.ndarray:
        return self.full & ~x

    def aneg(self, x: np.ndarray) -> np.ndarray:
        return self._lut[self.frame_ids, x]

    def box(self, x: np.ndarray) -> np.ndarray:
        """Worlds all of whose successors lie in ``x`` (that is, ¬∼x)."""
        return self.aneg(self.cneg(x))

    def binary(self, op: str, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if op == "and":
            return x & y
        if op == "or":
            return x | y
        if op == "impl":
            return (self.full & ~x) | y
        return self.full & ~(x ^ y)

    def truth(self, f: Formula) -> np.ndarray:
        """Truth mask of ``f`` in every model of the batch."""
        return self._core(desugar(f))

    def holds_at_actual(self, f: Formula) -> np.ndarray:
        return (self.truth(f) & self.actual) != 0

    def _core(self, f: Formula) -> np.ndarray:
        hit = self._memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            try:
                out = self.atoms[f]
            except KeyError:
                raise ModelError(f"atom {f} has no valuation in this model") from None
        elif isinstance(f, CNeg):
            out = self.cneg(self._core(f.arg))
        elif isinstance(f, ANeg):
            out = self.aneg(self._core(f.arg))
        elif isinstance(f, CBin):
            out = self.binary(f.op, self._core(f.left), self._core(f.right))
        elif isinstance(f, Meta):
            raise ModelError(f"cannot evaluate schema variable {f}")
        else:
            raise TypeError(f"not a core formula: {f!r}")
        self._memo[f] = out
        return out

    def model(self, i: int) -> Model:
        t = self.tables[int(self.frame_ids[i])]
        return Model(t.frame, {a: mask_to_set(v[i]) for a, v in self.atoms.items()})


def valuation_count(table: FrameTable, classical: Sequence[Atom],
                    alternate: Sequence[Atom]) -> int:
    return (1 << table.size) ** len(classical) * len(table.upsets) ** len(alternate)


def valuation_batch(table: FrameTable, classical: Sequence[Atom],
                    alternate: Sequence[Atom], start: int = 0,
                    stop: Optional[int] = None) -> ModelBatch:
    """Models ``start..stop`` of the frame in enumeration order.

    The order is itertools.product order over the atom list (classical atoms
    first, then alternate ones), so the first atom varies slowest.  Classical
    atoms range over all masks, alternate atoms over the up-closed ones.
    """
    total = valuation_count(table, classical, alternate)
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    radix = [1 << table.size] * len(classical) + [len(table.upsets)] * len(alternate)
    atoms = list(classical) + list(alternate)
    values = {}
    for a, r in zip(reversed(atoms), reversed(radix)):
        digit = idx % r
        idx = idx // r
        values[a] = digit if not a.alternate else table.upsets[digit]
    return ModelBatch([table], np.zeros(stop - start, dtype=np.int64), values)


def batch_from_models(models: Iterable[Model]) -> ModelBatch:
    """Pack explicit models into one batch; all must value the same atoms."""
    models = list(models)
    if not models:
        raise ValueError("empty model list")
    frames: dict[Frame, int] = {}
    ids = []
    for m in models:
        ids.append(frames.setdefault(m.frame, len(frames)))
    keys = set(models[0].val)
    if any(set(m.val) != keys for m in models):
        raise ModelError("models in a batch must value the same atoms")
    atoms = {a: np.array([sum(1 << w for w in m.val[a]) for m in models], dtype=np.int64)
             for a in keys}
    return ModelBatch([frame_table(f) for f in frames], np.array(ids), atoms)
