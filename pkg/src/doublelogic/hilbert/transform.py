"""Proof transformers: necessitation and the deduction theorem."""
from __future__ import annotations

from typing import Optional

from ..formula import Formula, impl, plus
from .proof import (AxiomInstance, Hypothesis, MP, Proof, ProofStep,
                    check_proof)

__all__ = ["necessitate", "deduction", "identity_steps", "TransformError"]


class TransformError(ValueError):
    pass


def _require_ok(p: Proof) -> None:
    rep = check_proof(p)
    if not rep:
        raise TransformError(f"input proof does not check: {rep}")


class _Out:
    def __init__(self):
        self.steps: list[ProofStep] = []

    def add(self, concl: Formula, by) -> int:
        self.steps.append(ProofStep(concl, by))
        return len(self.steps)

    def ax(self, schema: str, concl: Formula, **sub) -> int:
        return self.add(concl, AxiomInstance.of(schema, sub))


def necessitate(p: Proof) -> Proof:
    """Turn a hypothesis-free proof of X into a proof of +X.

    Axioms are lifted with Ax2.4 (an Ax2.4 step is lifted once more through
    Ax2.3), and each MP step is pushed through an Ax2.1 instance.
    """
    _require_ok(p)
    if p.hypotheses:
        raise TransformError("necessitation applies to hypothesis-free proofs only")
    out = _Out()
    lifted: list[int] = []
    for st in p.steps:
        c, by = st.conclusion, st.by
        if isinstance(by, AxiomInstance) and by.schema != "Ax2.4":
            lifted.append(out.ax("Ax2.4", plus(c), X=c))
        elif isinstance(by, AxiomInstance):
            k = out.add(c, by)
            t = out.ax("Ax2.3", impl(c, plus(c)), X=c)
            lifted.append(out.add(plus(c), MP(k, t)))
        else:
            a = p.steps[by.premise - 1].conclusion
            ia, iab = lifted[by.premise - 1], lifted[by.implication - 1]
            k = out.ax("Ax2.1", impl(plus(impl(a, c)), impl(plus(a), plus(c))), X=a, Y=c)
            k = out.add(impl(plus(a), plus(c)), MP(iab, k))
            lifted.append(out.add(plus(c), MP(ia, k)))
    return Proof((), out.steps)


def identity_steps(out: _Out, x: Formula) -> int:
    """Append the five-step proof of X ⊃ X; returns its last step number."""
    xx = impl(x, x)
    s1 = out.ax("Ax1.1", impl(x, impl(xx, x)), X=x, Y=xx)
    s2 = out.ax("Ax1.2", impl(impl(x, impl(xx, x)), impl(impl(x, xx), xx)), X=x, Y=xx, Z=x)
    s3 = out.add(impl(impl(x, xx), xx), MP(s1, s2))
    s4 = out.ax("Ax1.1", impl(x, xx), X=x, Y=x)
    return out.add(xx, MP(s4, s3))


def deduction(p: Proof, discharge: Optional[int] = None) -> Proof:
    """From a proof of Y under Γ and X, build a proof of X ⊃ Y under Γ.

    ``discharge`` picks the hypothesis playing X (default: the last one).
    Only Ax1.1, Ax1.2 and MP are introduced.  Steps not depending on X are
    copied unchanged.
    """
    _require_ok(p)
    if not p.hypotheses:
        raise TransformError("there is no hypothesis to discharge")
    d = len(p.hypotheses) - 1 if discharge is None else discharge
    if not 0 <= d < len(p.hypotheses):
        raise TransformError(f"hypothesis index {d} out of range")
    x = p.hypotheses[d]
    rest = p.hypotheses[:d] + p.hypotheses[d + 1:]
    out = _Out()
    # where[k] = (step number in output, True if it proves X ⊃ C_k)
    where: list[tuple[int, bool]] = []

    def as_conditional(k: int) -> int:
        pos, dep = where[k - 1]
        if dep:
            return pos
        c = p.steps[k - 1].conclusion
        w = out.ax("Ax1.1", impl(c, impl(x, c)), X=c, Y=x)
        return out.add(impl(x, c), MP(pos, w))

    for st in p.steps:
        c, by = st.conclusion, st.by
        if isinstance(by, Hypothesis) and by.index == d:
            where.append((identity_steps(out, x), True))
        elif isinstance(by, Hypothesis):
            where.append((out.add(c, Hypothesis(by.index - (by.index > d))), False))
        elif isinstance(by, AxiomInstance):
            where.append((out.add(c, by), False))
        elif not (where[by.premise - 1][1] or where[by.implication - 1][1]):
            i, j = where[by.premise - 1][0], where[by.implication - 1][0]
            where.append((out.add(c, MP(i, j)), False))
        else:
            a = p.steps[by.premise - 1].conclusion
            i = as_conditional(by.premise)
            j = as_conditional(by.implication)
            k = out.ax("Ax1.2", impl(impl(x, impl(a, c)), impl(impl(x, a), impl(x, c))),
                       X=x, Y=a, Z=c)
            k = out.add(impl(impl(x, a), impl(x, c)), MP(j, k))
            where.append((out.add(impl(x, c), MP(i, k)), True))
    as_conditional(len(p.steps))
    return Proof(rest, out.steps)
