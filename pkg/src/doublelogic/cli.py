"""Command-line interface.

Exit codes: 0 affirmative, 1 negative (countermodel, failed check, value 0),
2 usage or input error, 3 search bound exhausted.  JSON goes to stdout and
diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .formula import desugar, fragment_of
from .graphs.core import (GraphSyntaxError, graph_to_json, parse_graph, read,
                          translate)
from .graphs.rules import RuleError, Script, check_script, load_script
from .hilbert.proof import (ProofFormatError, check_proof, load_proof,
                            proof_to_jsonl)
from .hilbert.transform import TransformError, deduction, necessitate
from .kripke import (ModelError, evaluate, load_model, model_from_json,
                     model_to_dot, model_to_json)
from .syntax import FormulaSyntaxError, parse, to_text
from .validity import COUNTERMODEL, UNKNOWN, VALID, decide

OK, NEGATIVE, USAGE, UNKNOWN_EXIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, ensure_ascii=False, indent=None)
    sys.stdout.write("\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _formula(text: str):
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"formula: {exc}") from None


def _graph(text: str):
    try:
        return parse_graph(text)
    except GraphSyntaxError as exc:
        raise UsageError(f"graph: {exc}") from None


# --- subcommands ---------------------------------------------------------------------

def cmd_parse(args) -> int:
    f = _formula(args.formula)
    fr = fragment_of(f)
    _emit({"text": to_text(f), "core": to_text(desugar(f)),
           "in_fc": fr.in_fc, "in_fi": fr.in_fi, "in_fa": fr.in_fa})
    return OK


def cmd_eval(args) -> int:
    f = _formula(args.formula)
    m = load_model(args.model)
    v = evaluate(m, args.world, f)
    print(v)
    return OK if v else NEGATIVE


def _verdict_json(f, v) -> dict:
    out = {"formula": to_text(f), "verdict": v.tag, "bound": v.bound, "summary": str(v)}
    if v.tag == COUNTERMODEL:
        out["countermodel"] = model_to_json(v.witness)
    if v.tag == UNKNOWN:
        out["reason"] = v.reason
    return out


def cmd_valid(args) -> int:
    f = _formula(args.formula)
    max_worlds = args.max_worlds or _env_int("DOUBLELOGIC_MAX_WORLDS", 3)
    max_atoms = args.max_atoms or _env_int("DOUBLELOGIC_MAX_ATOMS", 2)
    if max_worlds < 1:
        raise UsageError("--max-worlds must be at least 1")
    v = decide(f, max_worlds, max_atoms=max_atoms, workers=args.workers)
    _emit(_verdict_json(f, v))
    _note(f"{v.tag} (bound {v.bound})")
    if v.tag == COUNTERMODEL and args.dot:
        Path(args.dot).write_text(model_to_dot(v.witness), encoding="utf-8")
    return {VALID: OK, COUNTERMODEL: NEGATIVE, UNKNOWN: UNKNOWN_EXIT}[v.tag]


def _proof(path):
    try:
        return load_proof(path)
    except (ProofFormatError, FormulaSyntaxError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_check_proof(args) -> int:
    p = _proof(args.file)
    rep = check_proof(p)
    if rep:
        _emit({"ok": True, "steps": len(p), "conclusion": to_text(p.conclusion)})
        return OK
    _emit({"ok": False, "step": rep.step, "reason": rep.reason})
    _note(str(rep))
    return NEGATIVE


def _write_proof(p, out: Optional[str]) -> None:
    text = proof_to_jsonl(p)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_necessitate(args) -> int:
    try:
        q = necessitate(_proof(args.file))
    except TransformError as exc:
        _note(str(exc))
        return NEGATIVE
    _write_proof(q, args.output)
    return OK


def cmd_deduce(args) -> int:
    try:
        q = deduction(_proof(args.file), args.discharge)
    except TransformError as exc:
        _note(str(exc))
        return NEGATIVE
    _write_proof(q, args.output)
    return OK


def cmd_graph_translate(args) -> int:
    g = translate(_formula(args.formula))
    _emit({"graph": g.text(), "tree": graph_to_json(g)})
    return OK


def cmd_graph_read(args) -> int:
    f = read(_graph(args.graph))
    _emit({"formula": to_text(f)})
    return OK


def _script(path) -> Script:
    try:
        return load_script(path)
    except (OSError, json.JSONDecodeError, KeyError, RuleError, GraphSyntaxError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _report(rep) -> dict:
    if rep:
        return {"ok": True, "final": rep.final.text()}
    return {"ok": False, "step": rep.step, "rule": rep.rule,
            "addr": list(rep.addr), "reason": rep.reason}


def cmd_graph_apply(args) -> int:
    s = _script(args.script)
    rep = check_script(Script(_graph(args.graph), s.steps))
    _emit(_report(rep))
    return OK if rep else NEGATIVE


def cmd_graph_check_gev(args) -> int:
    s = _script(args.script)
    rep = check_script(s)
    out = _report(rep)
    out["gev"] = bool(rep) and s.start.is_empty
    if rep and not s.start.is_empty:
        _note("script does not start from the empty graph; nothing certified")
    _emit(out)
    return OK if out["gev"] else NEGATIVE


def paradox_model():
    text = resources.files("doublelogic").joinpath("data/models/liar.json").read_text()
    return model_from_json(json.loads(text))


def cmd_demo(args) -> int:
    m = paradox_model()
    z = parse("x <=> !x")
    value = evaluate(m, m.frame.actual, z)
    results = {}
    for tail in ("~+x", "~!x", "~x", "~*x"):
        f = parse(f"(x <=> !x) => {tail}")
        results[to_text(f)] = decide(f, 3).tag
    _emit({"model": model_to_json(m), "formula": to_text(z), "value_at_actual": value,
           "consequences": results})
    good = value == 1 and all(t == VALID for t in results.values())
    return OK if good else NEGATIVE


# --- wiring ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="doublelogic",
                                description="Double logic LD: formulas, models, proofs and graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="print canonical text and fragment flags")
    s.add_argument("formula")
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("eval", help="evaluate a formula at a world of a model file")
    s.add_argument("--model", required=True)
    s.add_argument("--world", required=True)
    s.add_argument("formula")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("valid", help="bounded countermodel search")
    s.add_argument("formula")
    s.add_argument("--max-worlds", type=int, default=None)
    s.add_argument("--max-atoms", type=int, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--dot", help="write the countermodel as a DOT digraph")
    s.set_defaults(run=cmd_valid)

    s = sub.add_parser("check-proof", help="check a JSON-lines proof")
    s.add_argument("file")
    s.set_defaults(run=cmd_check_proof)

    s = sub.add_parser("necessitate", help="turn a proof of X into a proof of +X")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_necessitate)

    s = sub.add_parser("deduce", help="discharge a hypothesis (deduction theorem)")
    s.add_argument("file")
    s.add_argument("--discharge", type=int, default=None,
                   help="0-based hypothesis index (default: last)")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_deduce)

    g = sub.add_parser("graph", help="existential graph tools")
    gs = g.add_subparsers(dest="graph_command", required=True)
    s = gs.add_parser("translate")
    s.add_argument("formula")
    s.set_defaults(run=cmd_graph_translate)
    s = gs.add_parser("read")
    s.add_argument("graph")
    s.set_defaults(run=cmd_graph_read)
    s = gs.add_parser("apply")
    s.add_argument("graph")
    s.add_argument("--script", required=True)
    s.set_defaults(run=cmd_graph_apply)
    s = gs.add_parser("check-gev")
    s.add_argument("--script", required=True)
    s.set_defaults(run=cmd_graph_check_gev)

    d = sub.add_parser("demo", help="built-in demonstrations")
    d.add_argument("name", choices=["paradox"])
    d.set_defaults(run=cmd_demo)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        return args.run(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return USAGE
    except (ModelError, OSError, ValueError) as exc:
        _note(f"error: {exc}")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
