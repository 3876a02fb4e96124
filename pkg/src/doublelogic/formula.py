"""Formula trees for the double logic LD.

Two atom kinds exist side by side: classical atoms (``a``) whose truth value
may change freely from world to world, and alternate atoms (``_a``) that are
inherited along the accessibility relation.  Connectives come in three groups:

* classical: ``CNeg`` (∼) and ``CBin`` with ops ``impl`` ⊃, ``or`` ∪, ``and`` •, ``iff`` ≡
* alternate negation: ``ANeg`` (¬), the only primitive non-classical connective
* defined connectives: ``ABin`` (→ ∨ ∧ ↔) and ``Derived`` (+ ⊗ − *)

The defined connectives survive parsing so that they print back the way the
user wrote them; everything semantic works on :func:`desugar` output.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Union

__all__ = [
    "Atom", "Meta", "CNeg", "ANeg", "CBin", "ABin", "Derived", "Formula",
    "BINARY_OPS", "DERIVED_OPS", "Fragments",
    "atom", "alt", "neg", "aneg", "impl", "disj", "conj", "iff",
    "aimpl", "adisj", "aconj", "aiff", "plus", "circ", "minus", "star",
    "desugar", "kernel_form", "is_core", "fragment_of", "atoms_of",
    "metavars_of", "depth", "size", "substitute", "subformulas",
]

ATOM_RE = re.compile(r"[a-z][a-z0-9]*\Z")

BINARY_OPS = ("impl", "or", "and", "iff")
DERIVED_OPS = ("plus", "circ", "minus", "star")


@dataclass(frozen=True, order=True)
class Atom:
    name: str
    alternate: bool = False

    def __post_init__(self):
        if not ATOM_RE.match(self.name):
            raise ValueError(f"bad atom name {self.name!r}")

    @property
    def kind(self) -> str:
        return "alternate" if self.alternate else "classical"

    def __str__(self):
        return ("_" if self.alternate else "") + self.name


@dataclass(frozen=True)
class Meta:
    """Schema metavariable (X, Y, Z); never part of a user formula."""
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class CNeg:
    arg: Formula


@dataclass(frozen=True)
class ANeg:
    arg: Formula


@dataclass(frozen=True)
class CBin:
    op: str
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")


@dataclass(frozen=True)
class ABin:
    op: str
    left: Formula
    right: Formula

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")


@dataclass(frozen=True)
class Derived:
    op: str
    arg: Formula

    def __post_init__(self):
        if self.op not in DERIVED_OPS:
            raise ValueError(f"unknown derived op {self.op!r}")


Formula = Union[Atom, Meta, CNeg, ANeg, CBin, ABin, Derived]


# Short constructors, mostly for tests and proof construction.

def atom(name: str) -> Atom:
    return Atom(name)


def alt(name: str) -> Atom:
    return Atom(name, True)


def neg(x: Formula) -> CNeg:
    return CNeg(x)


def aneg(x: Formula) -> ANeg:
    return ANeg(x)


def impl(x: Formula, y: Formula) -> CBin:
    return CBin("impl", x, y)


def disj(x: Formula, y: Formula) -> CBin:
    return CBin("or", x, y)


def conj(x: Formula, y: Formula) -> CBin:
    return CBin("and", x, y)


def iff(x: Formula, y: Formula) -> CBin:
    return CBin("iff", x, y)


def aimpl(x: Formula, y: Formula) -> ABin:
    return ABin("impl", x, y)


def adisj(x: Formula, y: Formula) -> ABin:
    return ABin("or", x, y)


def aconj(x: Formula, y: Formula) -> ABin:
    return ABin("and", x, y)


def aiff(x: Formula, y: Formula) -> ABin:
    return ABin("iff", x, y)


def plus(x: Formula) -> Derived:
    return Derived("plus", x)


def circ(x: Formula) -> Derived:
    return Derived("circ", x)


def minus(x: Formula) -> Derived:
    return Derived("minus", x)


def star(x: Formula) -> Derived:
    return Derived("star", x)


def _box(x: Formula) -> Formula:
    # +X = ¬∼X
    return ANeg(CNeg(x))


@lru_cache(maxsize=1 << 16)
def desugar(f: Formula) -> Formula:
    """Rewrite every defined connective into ∼, ¬ and the classical binaries."""
    if isinstance(f, (Atom, Meta)):
        return f
    if isinstance(f, CNeg):
        return CNeg(desugar(f.arg))
    if isinstance(f, ANeg):
        return ANeg(desugar(f.arg))
    if isinstance(f, CBin):
        return CBin(f.op, desugar(f.left), desugar(f.right))
    if isinstance(f, ABin):
        return _box(CBin(f.op, desugar(f.left), desugar(f.right)))
    if isinstance(f, Derived):
        x = desugar(f.arg)
        if f.op == "plus":
            return _box(x)
        if f.op == "circ":
            return CNeg(ANeg(x))
        if f.op == "minus":
            return CNeg(_box(x))
        return CBin("or", ANeg(x), _box(x))
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=1 << 16)
def _collapse(f: Formula) -> Formula:
    if isinstance(f, (Atom, Meta)):
        return f
    if isinstance(f, CNeg):
        return CNeg(_collapse(f.arg))
    if isinstance(f, CBin):
        return CBin(f.op, _collapse(f.left), _collapse(f.right))
    # ANeg: drop double classical negations sitting right under ¬
    x = _collapse(f.arg)
    while isinstance(x, CNeg) and isinstance(x.arg, CNeg):
        x = x.arg.arg
    return ANeg(x)


def kernel_form(f: Formula) -> Formula:
    """Canonical representative used by the proof kernel for formula equality.

    Desugars, then identifies ¬∼∼Y with ¬Y (so that +∼Y and ¬Y coincide, as
    the notation ¬X = +∼X requires).
    """
    return _collapse(desugar(f))


def is_core(f: Formula) -> bool:
    return not any(isinstance(g, (ABin, Derived)) for g in subformulas(f))


class Fragments(NamedTuple):
    in_fc: bool
    in_fi: bool
    in_fa: bool


def _in_fc(f: Formula) -> bool:
    if isinstance(f, Atom):
        return not f.alternate
    if isinstance(f, CNeg):
        return _in_fc(f.arg)
    if isinstance(f, CBin):
        return _in_fc(f.left) and _in_fc(f.right)
    return False


def _in_fi(f: Formula) -> bool:
    if isinstance(f, Atom):
        return f.alternate
    if isinstance(f, ANeg):
        return _in_fi(f.arg)
    if isinstance(f, ABin):
        return _in_fi(f.left) and _in_fi(f.right)
    return False


def _in_fa(f: Formula) -> bool:
    return isinstance(f, ANeg) or (isinstance(f, Atom) and f.alternate)


def fragment_of(f: Formula) -> Fragments:
    """Membership of the surface formula in FC, FI and FA."""
    return Fragments(_in_fc(f), _in_fi(f), _in_fa(f))


def children(f: Formula) -> tuple:
    if isinstance(f, (Atom, Meta)):
        return ()
    if isinstance(f, (CNeg, ANeg, Derived)):
        return (f.arg,)
    return (f.left, f.right)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over every node (with repetitions)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def atoms_of(f: Formula) -> list[Atom]:
    """Atoms of ``f``, classical ones first, each group sorted by name."""
    found = {g for g in subformulas(f) if isinstance(g, Atom)}
    return sorted(found, key=lambda a: (a.alternate, a.name))


def metavars_of(f: Formula) -> list[str]:
    return sorted({g.name for g in subformulas(f) if isinstance(g, Meta)})


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace metavariables (keyed by name) or atoms (keyed by Atom)."""
    if isinstance(f, Meta):
        return mapping.get(f.name, f)
    if isinstance(f, Atom):
        return mapping.get(f, f)
    if isinstance(f, CNeg):
        return CNeg(substitute(f.arg, mapping))
    if isinstance(f, ANeg):
        return ANeg(substitute(f.arg, mapping))
    if isinstance(f, Derived):
        return Derived(f.op, substitute(f.arg, mapping))
    return type(f)(f.op, substitute(f.left, mapping), substitute(f.right, mapping))
