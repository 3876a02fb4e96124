"""Axiom schemas of LD and instance matching.

Matching compares kernel forms (see :func:`doublelogic.formula.kernel_form`),
so ``+(a => b) => (+a => +b)`` and ``!~(a => b) => (!~a => !~b)`` are both
instances of Ax2.1.  Under ¬ a pattern may absorb pairs of classical
negations, which makes matching a small backtracking search instead of a
plain tree walk.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Optional

from .formula import (ANeg, Atom, CBin, CNeg, Formula, Meta, desugar,
                      kernel_form, metavars_of, substitute)
from .syntax import parse

__all__ = ["SCHEMAS", "BASE_SCHEMAS", "schema_pattern", "instantiate",
           "match_schema", "which_axiom", "is_alternate_formula"]

SCHEMA_TEXT = {
    "Ax1.1": "X => (Y => X)",
    "Ax1.2": "(X => (Y => Z)) => ((X => Y) => (X => Z))",
    "Ax1.3": "X => X | Y",
    "Ax1.4": "Y => X | Y",
    "Ax1.5": "(X => Z) => ((Y => Z) => (X | Y => Z))",
    "Ax1.6": "X & Y => X",
    "Ax1.7": "X & Y => Y",
    "Ax1.8": "(X => Y) => ((X => Z) => (X => Y & Z))",
    "Ax1.9": "X => (~X => Y)",
    "Ax1.10": "X | ~X",
    "Ax1.11": "(X <=> Y) => (X => Y)",
    "Ax1.12": "(X <=> Y) => (Y => X)",
    "Ax1.13": "(X => Y) => ((Y => X) => (X <=> Y))",
    "Ax2.1": "+(X => Y) => (+X => +Y)",
    "Ax2.2": "!X => ~X",
    "Ax2.3": "X => +X",
    "Ax2.4": "+X",
}
SCHEMAS = tuple(SCHEMA_TEXT)
BASE_SCHEMAS = SCHEMAS[:-1]  # what Ax2.4 may lift


@lru_cache(maxsize=None)
def schema_pattern(schema: str) -> Formula:
    """Surface pattern of a schema, metavariables as :class:`Meta` leaves."""
    try:
        return parse(SCHEMA_TEXT[schema], allow_meta=True)
    except KeyError:
        raise ValueError(f"unknown axiom schema {schema!r}") from None


@lru_cache(maxsize=None)
def _core_pattern(schema: str) -> Formula:
    return desugar(schema_pattern(schema))


def instantiate(schema: str, sub: dict) -> Formula:
    pattern = schema_pattern(schema)
    missing = set(metavars_of(pattern)) - set(sub)
    if missing:
        raise ValueError(f"{schema}: no value for {sorted(missing)}")
    return substitute(pattern, sub)


def is_alternate_formula(f: Formula) -> bool:
    """FA membership up to notation: ¬Y or an alternate atom once desugared."""
    g = desugar(f)
    return isinstance(g, ANeg) or (isinstance(g, Atom) and g.alternate)


def _strip(f: Formula) -> Formula:
    while isinstance(f, CNeg) and isinstance(f.arg, CNeg):
        f = f.arg.arg
    return f


def _strict(p, t, sub, loose) -> Iterator[tuple]:
    if isinstance(p, Meta):
        bound = sub.get(p.name)
        if bound is None:
            yield {**sub, p.name: t}, loose
        elif bound == t:
            yield sub, loose
    elif isinstance(p, Atom):
        if p == t:
            yield sub, loose
    elif isinstance(p, CNeg):
        if isinstance(t, CNeg):
            yield from _strict(p.arg, t.arg, sub, loose)
    elif isinstance(p, ANeg):
        if isinstance(t, ANeg):
            yield from _loose(p.arg, t.arg, sub, loose)
    elif isinstance(p, CBin):
        if isinstance(t, CBin) and t.op == p.op:
            for s1, l1 in _strict(p.left, t.left, sub, loose):
                yield from _strict(p.right, t.right, s1, l1)
    else:
        raise TypeError(f"schema patterns are core formulas, got {p!r}")


def _loose(q, u, sub, loose) -> Iterator[tuple]:
    # Find bindings with strip(kernel(q[sub])) == u; u itself never starts with ∼∼.
    if isinstance(q, Meta) or (isinstance(q, CNeg) and isinstance(q.arg, Meta)):
        yield sub, loose + ((q, u),)
    elif isinstance(q, CNeg) and isinstance(q.arg, CNeg):
        yield from _loose(q.arg.arg, u, sub, loose)
    else:
        yield from _strict(q, u, sub, loose)


def _resolve(sub: dict, loose: tuple) -> Optional[dict]:
    sub = dict(sub)
    for q, u in loose:
        name = q.name if isinstance(q, Meta) else q.arg.name
        if name in sub:
            continue
        if isinstance(q, Meta):
            sub[name] = u
        else:
            sub[name] = u.arg if isinstance(u, CNeg) else CNeg(u)
    for q, u in loose:
        if _strip(kernel_form(substitute(q, sub))) != u:
            return None
    return sub


def _match_base(schema: str, target: Formula) -> Optional[dict]:
    pattern = _core_pattern(schema)
    for sub, loose in _strict(pattern, target, {}, ()):
        sub = _resolve(sub, loose)
        if sub is None:
            continue
        if kernel_form(substitute(pattern, sub)) != target:
            continue
        if schema == "Ax2.3" and not is_alternate_formula(sub["X"]):
            continue
        return sub
    return None


def match_schema(schema: str, f: Formula) -> Optional[dict]:
    """Substitution showing ``f`` is an instance of ``schema``, or None.

    Side conditions are enforced: Ax2.3 needs X in FA, Ax2.4 needs X to be an
    instance of one of Ax1.1 .. Ax2.3 (one + layer only).
    """
    if schema not in SCHEMA_TEXT:
        raise ValueError(f"unknown axiom schema {schema!r}")
    target = kernel_form(f)
    if schema != "Ax2.4":
        return _match_base(schema, target)
    if isinstance(target, ANeg) and isinstance(target.arg, CNeg):
        inner = target.arg.arg
        if any(_match_base(s, inner) is not None for s in BASE_SCHEMAS):
            return {"X": inner}
    return None


def which_axiom(f: Formula) -> Optional[str]:
    """First schema (in listing order) that ``f`` instantiates."""
    for schema in SCHEMAS:
        if match_schema(schema, f) is not None:
            return schema
    return None
