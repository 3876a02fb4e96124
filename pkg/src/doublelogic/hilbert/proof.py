"""Proof objects, the checker and the JSON-lines proof format.

Step numbers are 1-based everywhere (``MP 3 5`` cites steps 3 and 5, the
premise and the implication); hypothesis indices are 0-based (``HYP 0``).
Formula equality is equality of kernel forms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from ..formula import CBin, Formula, kernel_form
from ..schemas import SCHEMAS, instantiate, match_schema
from ..syntax import parse, to_text

__all__ = ["AxiomInstance", "Hypothesis", "MP", "ProofStep", "Proof",
           "CheckReport", "check_proof", "same_formula", "proof_to_jsonl",
           "proof_from_jsonl", "load_proof", "save_proof", "ProofFormatError"]


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    sub: tuple[tuple[str, Formula], ...] = ()

    @classmethod
    def of(cls, schema: str, sub: Optional[dict] = None) -> AxiomInstance:
        return cls(schema, tuple(sorted((sub or {}).items())))

    @property
    def mapping(self) -> dict:
        return dict(self.sub)

    def __str__(self):
        return self.schema


@dataclass(frozen=True)
class Hypothesis:
    index: int

    def __str__(self):
        return f"HYP {self.index}"


@dataclass(frozen=True)
class MP:
    premise: int      # step number of A
    implication: int  # step number of A ⊃ B

    def __str__(self):
        return f"MP {self.premise} {self.implication}"


Justification = Union[AxiomInstance, Hypothesis, MP]


@dataclass(frozen=True)
class ProofStep:
    conclusion: Formula
    by: Justification


@dataclass(frozen=True)
class Proof:
    hypotheses: tuple[Formula, ...]
    steps: tuple[ProofStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
        object.__setattr__(self, "steps", tuple(self.steps))

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].conclusion

    def __len__(self) -> int:
        return len(self.steps)

    def pruned(self) -> Proof:
        """Drop steps the final conclusion does not depend on."""
        keep = set()
        pending = [len(self.steps)]
        while pending:
            k = pending.pop()
            if k in keep:
                continue
            keep.add(k)
            by = self.steps[k - 1].by
            if isinstance(by, MP):
                pending += [by.premise, by.implication]
        order = sorted(keep)
        renum = {old: new for new, old in enumerate(order, 1)}
        steps = []
        for k in order:
            st = self.steps[k - 1]
            by = st.by
            if isinstance(by, MP):
                by = MP(renum[by.premise], renum[by.implication])
            steps.append(ProofStep(st.conclusion, by))
        return Proof(self.hypotheses, steps)


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    step: Optional[int] = None   # 1-based number of the first bad step
    reason: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"step {self.step}: {self.reason}"


def same_formula(x: Formula, y: Formula) -> bool:
    return kernel_form(x) == kernel_form(y)


def _check_step(p: Proof, k: int) -> Optional[str]:
    st = p.steps[k - 1]
    by = st.by
    if isinstance(by, Hypothesis):
        if not 0 <= by.index < len(p.hypotheses):
            return f"hypothesis index {by.index} out of range"
        if not same_formula(p.hypotheses[by.index], st.conclusion):
            return f"conclusion differs from hypothesis {by.index}"
        return None
    if isinstance(by, AxiomInstance):
        if by.schema not in SCHEMAS:
            return f"unknown schema {by.schema}"
        if match_schema(by.schema, st.conclusion) is None:
            return f"not an instance of {by.schema}"
        if by.sub:
            try:
                inst = instantiate(by.schema, by.mapping)
            except ValueError as exc:
                return str(exc)
            if not same_formula(inst, st.conclusion):
                return f"substitution does not produce the conclusion of {by.schema}"
        return None
    if isinstance(by, MP):
        for ref in (by.premise, by.implication):
            if not 1 <= ref < k:
                return f"MP cites step {ref}, which is not an earlier step"
        a = kernel_form(p.steps[by.premise - 1].conclusion)
        ab = kernel_form(p.steps[by.implication - 1].conclusion)
        if not (isinstance(ab, CBin) and ab.op == "impl"):
            return f"step {by.implication} is not an implication"
        if ab.left != a:
            return f"antecedent of step {by.implication} is not step {by.premise}"
        if ab.right != kernel_form(st.conclusion):
            return f"consequent of step {by.implication} is not this conclusion"
        return None
    return f"unknown justification {by!r}"


def check_proof(p: Proof) -> CheckReport:
    """Check every step; report the earliest failure."""
    if not p.steps:
        return CheckReport(False, 0, "empty proof")
    for k in range(1, len(p.steps) + 1):
        reason = _check_step(p, k)
        if reason is not None:
            return CheckReport(False, k, reason)
    return CheckReport(True)


# --- JSON lines ---------------------------------------------------------------

class ProofFormatError(ValueError):
    pass


def proof_to_jsonl(p: Proof) -> str:
    lines = [json.dumps({"hyps": [to_text(h) for h in p.hypotheses]})]
    for st in p.steps:
        rec = {"concl": to_text(st.conclusion), "by": str(st.by)}
        if isinstance(st.by, AxiomInstance) and st.by.sub:
            rec["sub"] = {k: to_text(v) for k, v in st.by.sub}
        lines.append(json.dumps(rec, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def _parse_by(text: str, sub: dict) -> Justification:
    parts = text.split()
    try:
        if parts[0] == "HYP" and len(parts) == 2:
            return Hypothesis(int(parts[1]))
        if parts[0] == "MP" and len(parts) == 3:
            return MP(int(parts[1]), int(parts[2]))
    except ValueError:
        raise ProofFormatError(f"bad justification {text!r}") from None
    if len(parts) == 1:
        return AxiomInstance.of(parts[0], {k: parse(v) for k, v in sub.items()})
    raise ProofFormatError(f"bad justification {text!r}")


def proof_from_jsonl(text: Union[str, Iterable[str]]) -> Proof:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    records = [json.loads(l) for l in lines if l.strip()]
    hyps: list[Formula] = []
    if records and "hyps" in records[0]:
        hyps = [parse(h) for h in records.pop(0)["hyps"]]
    steps = []
    for n, rec in enumerate(records, 1):
        try:
            steps.append(ProofStep(parse(rec["concl"]), _parse_by(rec["by"], rec.get("sub", {}))))
        except KeyError as exc:
            raise ProofFormatError(f"record {n} lacks field {exc}") from None
    return Proof(tuple(hyps), tuple(steps))


def load_proof(path) -> Proof:
    with open(path, encoding="utf-8") as fh:
        return proof_from_jsonl(fh.read())


def save_proof(p: Proof, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(proof_to_jsonl(p))
