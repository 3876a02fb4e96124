"""Hand-written derivations from the empty sheet, shipped as data files."""
from __future__ import annotations

from pathlib import Path

from .core import EMPTY, parse_graph
from .rules import Script, ScriptStep, save_script

__all__ = ["GOLDEN_SCRIPTS", "golden_scripts", "write_golden_scripts"]


def _ax11() -> Script:
    # (a((b(a)))): open (()), write a, open a double cut inside, write b, copy a in
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("a")),
        ScriptStep("DCC-in", (0, 0), sel=()),
        ScriptStep("E", (0, 0, 0), payload=parse_graph("b")),
        ScriptStep("IC", (0, 1), target=(0, 0, 0, 0)),
    ))


def _ax110() -> Script:
    # ((a)((a)))
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("(a)")),
        ScriptStep("IC", (0, 1), target=(0, 0)),
    ))


def _ax22() -> Script:
    # ([a]((a)))
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("[a]")),
        ScriptStep("IC", (0, 1), target=(0, 0)),
        ScriptStep("CC", (0, 0, 0)),
    ))


def _ax23() -> Script:
    # (_a([(_a)]))
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("_a")),
        ScriptStep("IC", (0, 1), target=(0, 0)),
        ScriptStep("DCMF", (0, 0, 0)),
    ))


def _identity() -> Script:
    # (a(a))
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("a")),
        ScriptStep("IC", (0, 1), target=(0, 0)),
    ))


def _ax16() -> Script:
    # (a b(a))
    return Script(EMPTY, (
        ScriptStep("DCC-in", (), sel=()),
        ScriptStep("E", (0,), payload=parse_graph("a b")),
        ScriptStep("IC", (0,), sel=(1,), target=(0, 0)),
    ))


def _plus_ax11() -> Script:
    # [((a((b(a)))))]: the Ax1.1 graph wrapped by DCMGEV with its own derivation
    base = _ax11()
    return Script(EMPTY, base.steps + (ScriptStep("DCMGEV-in", (), witness=base),))


def _dcm_lambda() -> Script:
    return Script(EMPTY, (ScriptStep("DCMλ", ()),))


# name -> (builder, formula whose translation is the final graph)
GOLDEN_SCRIPTS = {
    "ax1_1": (_ax11, "a => (b => a)"),
    "ax1_10": (_ax110, "a | ~a"),
    "ax2_2": (_ax22, "!a => ~a"),
    "ax2_3": (_ax23, "_a => +_a"),
    "identity": (_identity, "a => a"),
    "ax1_6": (_ax16, "a & b => a"),
    "plus_ax1_1": (_plus_ax11, "+(a => (b => a))"),
    "dcm_lambda": (_dcm_lambda, None),
}


def golden_scripts() -> dict[str, Script]:
    return {name: build() for name, (build, _) in GOLDEN_SCRIPTS.items()}


def write_golden_scripts(directory) -> list[str]:
    """Write each script as ``<name>.jsonl``; witnesses are referenced by file."""
    scripts = golden_scripts()
    names = []
    for name, s in scripts.items():
        refs = {}
        for st in s.steps:
            if st.witness is not None and st.witness.steps:
                # the only non-trivial witness in the corpus is the Ax1.1 derivation
                refs[id(st.witness)] = "ax1_1.jsonl"
        path = Path(directory) / f"{name}.jsonl"
        save_script(s, path, refs)
        names.append(path.name)
    return names
