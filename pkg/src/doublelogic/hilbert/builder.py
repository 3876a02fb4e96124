"""Forward proof construction with a handful of natural-deduction tactics.

A :class:`Builder` accumulates checked steps under a list of hypotheses and
looks formulas up by kernel form, so a derived formula can be reused by
value.  Discharging an assumption runs the deduction transformer on a
sub-derivation and splices the result back.  Classical lemmas are proved once
over placeholder atoms and then instantiated.

The golden theorems are built here; ``golden_proofs()`` returns them.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

from ..formula import (CBin, Formula, aneg, atom, conj, disj, iff, impl, kernel_form, neg,
                       plus, star, substitute)
from ..schemas import match_schema
from .proof import (AxiomInstance, Hypothesis, MP, Proof, ProofStep,
                    check_proof)
from .transform import deduction, necessitate

__all__ = ["Builder", "BuildError", "lemma", "golden_proofs", "GOLDEN"]


class BuildError(ValueError):
    pass


class Builder:
    def __init__(self, hypotheses=()):
        self.hyps: list[Formula] = list(hypotheses)
        self.steps: list[ProofStep] = []
        self.index: dict[Formula, int] = {}

    # --- bookkeeping ---------------------------------------------------------
    def _add(self, concl: Formula, by) -> Formula:
        key = kernel_form(concl)
        if key not in self.index:
            self.steps.append(ProofStep(concl, by))
            self.index[key] = len(self.steps)
        return concl

    def num(self, f: Formula) -> int:
        try:
            return self.index[kernel_form(f)]
        except KeyError:
            raise BuildError(f"not derived yet: {f}") from None

    def has(self, f: Formula) -> bool:
        return kernel_form(f) in self.index

    def proof(self, goal: Optional[Formula] = None) -> Proof:
        """Proof ending in ``goal`` (default: the last step), unused steps dropped."""
        end = len(self.steps) if goal is None else self.num(goal)
        p = Proof(tuple(self.hyps), tuple(self.steps[:end])).pruned()
        if goal is not None:
            # end with the goal exactly as stated
            last = p.steps[-1]
            p = Proof(p.hypotheses, p.steps[:-1] + (ProofStep(goal, last.by),))
        return p

    def splice(self, p: Proof) -> Formula:
        """Copy the steps of ``p`` (whose hypotheses are ours) into this builder."""
        if list(p.hypotheses) != self.hyps[:len(p.hypotheses)]:
            raise BuildError("hypotheses do not line up")
        nums = []
        for st in p.steps:
            by = st.by
            if isinstance(by, MP):
                by = MP(nums[by.premise - 1], nums[by.implication - 1])
            self._add(st.conclusion, by)
            nums.append(self.num(st.conclusion))
        return p.conclusion

    # --- primitive moves -----------------------------------------------------
    def hyp(self, i: int = -1) -> Formula:
        i = i % len(self.hyps)
        return self._add(self.hyps[i], Hypothesis(i))

    def ax(self, schema: str, concl: Formula) -> Formula:
        sub = match_schema(schema, concl)
        if sub is None:
            raise BuildError(f"{concl} is not an instance of {schema}")
        return self._add(concl, AxiomInstance.of(schema, sub))

    def mp(self, a: Formula, ab: Formula) -> Formula:
        x, y = _split(ab, "impl")
        if kernel_form(x) != kernel_form(a):
            raise BuildError(f"cannot apply MP to {a} and {ab}")
        return self._add(y, MP(self.num(a), self.num(ab)))

    def mp2(self, a: Formula, b: Formula, abc: Formula) -> Formula:
        return self.mp(b, self.mp(a, abc))

    # --- tactics -------------------------------------------------------------
    def assume(self, x: Formula, body: Callable[[Builder], Formula]) -> Formula:
        """Derive ``x ⊃ body(...)`` by discharging ``x``."""
        inner = Builder(self.hyps + [x])
        inner.hyp()
        # everything already derived stays available inside
        for st in self.steps:
            by = st.by
            if isinstance(by, MP):
                by = MP(inner.num(self.steps[by.premise - 1].conclusion),
                        inner.num(self.steps[by.implication - 1].conclusion))
            inner._add(st.conclusion, by)
        goal = body(inner)
        return self.splice(deduction(inner.proof(goal)))

    def use(self, lem: Proof, **sub: Formula) -> Formula:
        """Instantiate a hypothesis-free lemma over atoms p, q, r."""
        mapping = {atom(k): v for k, v in sub.items()}
        steps = []
        for st in lem.steps:
            by = st.by
            if isinstance(by, AxiomInstance):
                by = AxiomInstance.of(by.schema, {k: substitute(v, mapping)
                                                  for k, v in by.sub})
            steps.append(ProofStep(substitute(st.conclusion, mapping), by))
        return self.splice(Proof(tuple(self.hyps[:0]), tuple(steps)))

    def conj_intro(self, x: Formula, y: Formula) -> Formula:
        return self.mp2(x, y, self.use(lemma("conj_intro"), p=x, q=y))

    def left(self, xy: Formula) -> Formula:
        return self.mp(xy, self.ax("Ax1.6", impl(xy, _split(xy, "and")[0])))

    def right(self, xy: Formula) -> Formula:
        return self.mp(xy, self.ax("Ax1.7", impl(xy, _split(xy, "and")[1])))

    def cases(self, xy: Formula, goal: Formula, xg: Formula, yg: Formula) -> Formula:
        """From X ∪ Y, X ⊃ G and Y ⊃ G conclude G."""
        x, y = _split(xy, "or")
        rule = self.ax("Ax1.5", impl(xg, impl(yg, impl(disj(x, y), goal))))
        return self.mp(xy, self.mp2(xg, yg, rule))

    def absurd(self, x: Formula, goal: Formula) -> Formula:
        """From X and ∼X conclude anything."""
        return self.mp2(x, neg(x), self.ax("Ax1.9", impl(x, impl(neg(x), goal))))

    def identity(self, x: Formula) -> Formula:
        return self.use(lemma("id"), p=x)

    def neg_intro(self, x: Formula, x_to_nx: Formula) -> Formula:
        """From X ⊃ ∼X conclude ∼X (cases on X ∪ ∼X)."""
        em = self.ax("Ax1.10", disj(x, neg(x)))
        return self.cases(em, neg(x), x_to_nx, self.identity(neg(x)))

    def lift(self, x_to_y: Formula) -> Formula:
        """From a theorem X ⊃ Y (no hypotheses used) conclude +X ⊃ +Y."""
        x, y = _split(x_to_y, "impl")
        boxed = self.splice(necessitate(self.proof(x_to_y)))
        return self.mp(boxed, self.ax("Ax2.1", impl(plus(x_to_y), impl(plus(x), plus(y)))))

    def lift2(self, xyz: Formula) -> Formula:
        """From a theorem X ⊃ (Y ⊃ Z) conclude +X ⊃ (+Y ⊃ +Z)."""
        x, yz = _split(xyz, "impl")
        y, z = _split(yz, "impl")
        first = self.lift(xyz)                       # +X ⊃ +(Y ⊃ Z)
        k = self.ax("Ax2.1", impl(plus(yz), impl(plus(y), plus(z))))
        return self.assume(plus(x), lambda b: b.mp(b.mp(plus(x), first), k))

    def equivalence(self, xy: Formula, yx: Formula) -> Formula:
        x, y = _split(xy, "impl")
        return self.mp2(xy, yx, self.ax("Ax1.13", impl(xy, impl(yx, iff(x, y)))))


def _split(f: Formula, op: str) -> tuple[Formula, Formula]:
    """Operands of a binary formula, read through defined notation if needed."""
    if isinstance(f, CBin) and f.op == op:
        return f.left, f.right
    k = kernel_form(f)
    if isinstance(k, CBin) and k.op == op:
        return k.left, k.right
    raise BuildError(f"{f} is not of the expected shape")


P, Q = atom("p"), atom("q")


@lru_cache(maxsize=None)
def lemma(name: str) -> Proof:
    """Classical lemmas over atoms p, q; each is checked before use."""
    b = Builder()
    if name == "id":
        from .transform import _Out, identity_steps
        out = _Out()
        identity_steps(out, P)
        return Proof((), tuple(out.steps))
    if name == "conj_intro":
        # p ⊃ (q ⊃ p • q) from Ax1.8 with antecedent p
        def body_p(bp):
            def body_q(bq):
                weak = bq.mp(Q, bq.ax("Ax1.1", impl(Q, impl(P, Q))))
                rule = bq.ax("Ax1.8", impl(impl(P, P), impl(impl(P, Q), impl(P, conj(P, Q)))))
                return bq.mp(P, bq.mp2(bq.identity(P), weak, rule))
            return bp.assume(Q, body_q)
        goal = b.assume(P, body_p)
    elif name == "dn":
        # ∼∼p ⊃ p
        def body(bb):
            np_p = bb.assume(neg(P), lambda c: c.absurd(neg(P), P))
            em = bb.ax("Ax1.10", disj(P, neg(P)))
            return bb.cases(em, P, bb.identity(P), np_p)
        goal = b.assume(neg(neg(P)), body)
    elif name in ("nor_left", "nor_right"):
        # ∼(p ∪ q) ⊃ ∼p   /   ∼(p ∪ q) ⊃ ∼q
        side, schema = (P, "Ax1.3") if name == "nor_left" else (Q, "Ax1.4")
        pq = disj(P, Q)

        def body(bb):
            intro = bb.ax(schema, impl(side, pq))
            contra = bb.assume(side, lambda c: c.absurd(c.mp(side, intro), neg(side)))
            return bb.neg_intro(side, contra)
        goal = b.assume(neg(pq), body)
    elif name == "nor_intro":
        # ∼p ⊃ (∼q ⊃ ∼(p ∪ q))
        pq = disj(P, Q)

        def body(bb):
            def inner(c):
                fp = c.assume(P, lambda d: d.absurd(P, neg(pq)))
                fq = c.assume(Q, lambda d: d.absurd(Q, neg(pq)))
                rule = c.ax("Ax1.5", impl(impl(P, neg(pq)), impl(impl(Q, neg(pq)), impl(pq, neg(pq)))))
                return c.neg_intro(pq, c.mp2(fp, fq, rule))
            return bb.assume(neg(Q), inner)
        goal = b.assume(neg(P), body)
    elif name in ("nand_left", "nand_right"):
        # ∼p ⊃ ∼(p • q)   /   ∼q ⊃ ∼(p • q)
        side = P if name == "nand_left" else Q
        pq = conj(P, Q)
        schema = "Ax1.6" if side == P else "Ax1.7"

        def body(bb):
            contra = bb.assume(pq, lambda c: c.absurd(c.mp(pq, c.ax(schema, impl(pq, side))), neg(pq)))
            return bb.neg_intro(pq, contra)
        goal = b.assume(neg(side), body)
    else:
        raise KeyError(name)
    p = b.proof(goal)
    rep = check_proof(p)
    if not rep:
        raise BuildError(f"lemma {name} does not check: {rep}")
    return p


A, B = atom("a"), atom("b")


def _plus_and() -> Proof:
    b = Builder()
    ab = conj(A, B)
    to_a = b.lift(b.ax("Ax1.6", impl(ab, A)))
    to_b = b.lift(b.ax("Ax1.7", impl(ab, B)))
    fwd = b.assume(plus(ab), lambda c: c.conj_intro(c.mp(plus(ab), to_a), c.mp(plus(ab), to_b)))
    intro = b.use(lemma("conj_intro"), p=A, q=B)
    lifted = b.lift2(intro)  # +a ⊃ (+b ⊃ +(a • b))
    both = conj(plus(A), plus(B))
    back = b.assume(both, lambda c: c.mp2(c.left(both), c.right(both), lifted))
    return _final(b, b.equivalence(fwd, back))


def _neg_or() -> Proof:
    b = Builder()
    ab = disj(A, B)
    na, nb, nab = aneg(A), aneg(B), aneg(ab)
    # +∼(a ∪ b) ⊃ +∼a is ¬(a ∪ b) ⊃ ¬a
    to_a = b.lift(b.use(lemma("nor_left"), p=A, q=B))
    to_b = b.lift(b.use(lemma("nor_right"), p=A, q=B))
    b.assume(nab, lambda c: c.conj_intro(c.mp(nab, to_a), c.mp(nab, to_b)))
    back_k = b.lift2(b.use(lemma("nor_intro"), p=A, q=B))
    both = conj(na, nb)
    b.assume(both, lambda c: c.mp2(c.left(both), c.right(both), back_k))
    return _final(b, b.equivalence(impl(nab, both), impl(both, nab)))


def _neg_and() -> Proof:
    b = Builder()
    ab = conj(A, B)
    na, nb, nab = aneg(A), aneg(B), aneg(ab)
    b.lift(b.use(lemma("nand_left"), p=A, q=B))
    b.lift(b.use(lemma("nand_right"), p=A, q=B))
    from_a, from_b = impl(na, nab), impl(nb, nab)
    rule = b.ax("Ax1.5", impl(from_a, impl(from_b, impl(disj(na, nb), nab))))
    return _final(b, b.mp2(from_a, from_b, rule))


def _box_to_atom(c: Builder, x: Formula) -> Formula:
    """From +x derive x, through ¬∼x ⊃ ∼∼x and double negation."""
    nn = c.mp(plus(x), c.ax("Ax2.2", impl(aneg(neg(x)), neg(neg(x)))))
    return c.mp(nn, c.use(lemma("dn"), p=x))


def _neg_to_cneg(c: Builder, x: Formula) -> Formula:
    return c.mp(aneg(x), c.ax("Ax2.2", impl(aneg(x), neg(x))))


STAR_A = disj(aneg(A), plus(A))  # *a spelled out


def _star_plus() -> Proof:
    b = Builder()
    lhs = conj(A, star(A))

    def fwd_body(c):
        c.left(lhs)
        c.right(lhs)

        def neg_case(d):
            _neg_to_cneg(d, A)
            return d.absurd(A, plus(A))
        nc = c.assume(aneg(A), neg_case)
        return c.cases(STAR_A, plus(A), nc, c.identity(plus(A)))

    def back_body(c):
        a = _box_to_atom(c, A)
        c.mp(plus(A), c.ax("Ax1.4", impl(plus(A), STAR_A)))
        return c.conj_intro(a, star(A))

    b.assume(lhs, fwd_body)
    b.assume(plus(A), back_body)
    return _final(b, b.equivalence(impl(lhs, plus(A)), impl(plus(A), lhs)))


def _star_neg() -> Proof:
    b = Builder()
    lhs = conj(neg(A), star(A))

    def fwd_body(c):
        c.left(lhs)
        c.right(lhs)

        def plus_case(d):
            _box_to_atom(d, A)
            return d.absurd(A, aneg(A))
        pc = c.assume(plus(A), plus_case)
        return c.cases(STAR_A, aneg(A), c.identity(aneg(A)), pc)

    def back_body(c):
        na = _neg_to_cneg(c, A)
        c.mp(aneg(A), c.ax("Ax1.3", impl(aneg(A), STAR_A)))
        return c.conj_intro(na, star(A))

    b.assume(lhs, fwd_body)
    b.assume(aneg(A), back_body)
    return _final(b, b.equivalence(impl(lhs, aneg(A)), impl(aneg(A), lhs)))


def _final(b: Builder, goal: Formula) -> Proof:
    p = b.proof(goal)
    rep = check_proof(p)
    if not rep:
        raise BuildError(f"golden proof of {goal} does not check: {rep}")
    return p


GOLDEN = {
    "plus_and": ("+(a & b) <=> +a & +b", _plus_and),
    "neg_or": ("!(a | b) <=> !a & !b", _neg_or),
    "neg_and": ("!a | !b => !(a & b)", _neg_and),
    "star_plus": ("a & *a <=> +a", _star_plus),
    "star_neg": ("~a & *a <=> !a", _star_neg),
}


def golden_proofs() -> dict[str, Proof]:
    return {name: build() for name, (_, build) in GOLDEN.items()}


def write_golden(directory) -> list[str]:
    """Write every golden proof as ``<name>.jsonl``; returns the file names."""
    from pathlib import Path
    from .proof import save_proof

    out = []
    for name, p in golden_proofs().items():
        path = Path(directory) / f"{name}.jsonl"
        save_proof(p, path)
        out.append(path.name)
    return out
