r"""ASCII concrete syntax for formulas.

Prefix operators bind tightest: ``~`` (∼), ``!`` (¬), ``+``, ``?`` (⊗),
``#`` (−) and ``*``.  Binary connectives, loosest first::

    1   <=>  <->    ≡  ↔
    2   =>   ->     ⊃  →
    3   |    \/     ∪  ∨
    4   &    /\     •  ∧

All binaries associate to the right.  Classical atoms are ``[a-z][a-z0-9]*``;
a leading underscore marks an alternate atom (``_a``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (ABin, ANeg, Atom, CBin, CNeg, Derived, Formula, Meta)

__all__ = ["SourceSpan", "FormulaSyntaxError", "parse", "to_text"]

UNARY = {"~": "cneg", "!": "aneg", "+": "plus", "?": "circ", "#": "minus", "*": "star"}
UNARY_SYMBOL = {"plus": "+", "circ": "?", "minus": "#", "star": "*"}

# token -> (level, alternate?, op)
BINARY = {
    "<=>": (1, False, "iff"), "<->": (1, True, "iff"),
    "=>": (2, False, "impl"), "->": (2, True, "impl"),
    "|": (3, False, "or"), "\\/": (3, True, "or"),
    "&": (4, False, "and"), "/\\": (4, True, "and"),
}
BINARY_SYMBOL = {(alt_, op): tok for tok, (_, alt_, op) in BINARY.items()}
LEVEL = {op: lvl for (lvl, _, op) in BINARY.values()}

TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<atom>_?[a-z][a-z0-9]*)
  | (?P<meta>[A-Z][0-9]*)
  | (?P<bin><=>|<->|=>|->|/\\|\\/|&|\|)
  | (?P<un>[~!+?#*])
  | (?P<lp>\()
  | (?P<rp>\))
""", re.VERBOSE)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} at bytes {span.start}..{span.end}")
        self.span = span


def _tokenize(text: str, allow_meta: bool):
    pos, out = 0, []
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}",
                                     _span(text, pos, pos + 1))
        kind = m.lastgroup
        if kind == "meta" and not allow_meta:
            raise FormulaSyntaxError("uppercase names are reserved for schemas",
                                     _span(text, pos, m.end()))
        if kind != "ws":
            out.append((kind, m.group(), pos, m.end()))
        pos = m.end()
    out.append(("eof", "", len(text), len(text)))
    return out


def _span(text: str, start: int, end: int) -> SourceSpan:
    b = len(text[:start].encode())
    return SourceSpan(b, b + len(text[start:end].encode()))


class _Parser:
    def __init__(self, text: str, allow_meta: bool):
        self.text = text
        self.toks = _tokenize(text, allow_meta)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def fail(self, message, tok=None):
        kind, val, s, e = tok or self.peek()
        raise FormulaSyntaxError(message, _span(self.text, s, e))

    def binary(self, level: int) -> Formula:
        if level > 4:
            return self.unary()
        left = self.binary(level + 1)
        kind, val, *_ = self.peek()
        if kind == "bin" and BINARY[val][0] == level:
            self.i += 1
            right = self.binary(level)
            _, alternate, op = BINARY[val]
            return (ABin if alternate else CBin)(op, left, right)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        kind, val, *_ = tok
        if kind == "un":
            self.i += 1
            arg = self.unary()
            op = UNARY[val]
            if op == "cneg":
                return CNeg(arg)
            if op == "aneg":
                return ANeg(arg)
            return Derived(op, arg)
        if kind == "atom":
            self.i += 1
            return Atom(val.lstrip("_"), val.startswith("_"))
        if kind == "meta":
            self.i += 1
            return Meta(val)
        if kind == "lp":
            self.i += 1
            inner = self.binary(1)
            if self.peek()[0] != "rp":
                self.fail("expected ')'")
            self.i += 1
            return inner
        if kind == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {val!r}")


def parse(text: str, *, allow_meta: bool = False) -> Formula:
    """Parse one formula; raises :class:`FormulaSyntaxError` with a byte span."""
    p = _Parser(text, allow_meta)
    f = p.binary(1)
    if p.peek()[0] != "eof":
        p.fail(f"trailing input {p.peek()[1]!r}")
    return f


def _prec(f: Formula) -> int:
    if isinstance(f, (CBin, ABin)):
        return LEVEL[f.op]
    return 5


def to_text(f: Formula) -> str:
    """Canonical text; ``parse(to_text(f)) == f`` for every formula."""
    if isinstance(f, (Atom, Meta)):
        return str(f)
    if isinstance(f, (CNeg, ANeg, Derived)):
        if isinstance(f, CNeg):
            sym = "~"
        elif isinstance(f, ANeg):
            sym = "!"
        else:
            sym = UNARY_SYMBOL[f.op]
        inner = to_text(f.arg)
        return sym + (f"({inner})" if _prec(f.arg) < 5 else inner)
    level = LEVEL[f.op]
    left, right = to_text(f.left), to_text(f.right)
    if _prec(f.left) <= level:
        left = f"({left})"
    if _prec(f.right) < level:
        right = f"({right})"
    return f"{left} {BINARY_SYMBOL[(isinstance(f, ABin), f.op)]} {right}"
