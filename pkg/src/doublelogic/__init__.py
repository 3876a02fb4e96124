"""Double logic LD: classical and alternate connectives over partially ordered Kripke frames.

Formulas, a parser and printer, model checking, a bounded validity search,
a Hilbert proof kernel and an existential-graph calculus.
"""
from __future__ import annotations

from .formula import Atom, alt, atom, desugar, fragment_of, kernel_form
from .kripke import Frame, Model, evaluate, load_model, model_from_json, model_to_json
from .syntax import FormulaSyntaxError, parse, to_text
from .validity import Verdict, classical_oracle, decide, enumerate_posets, intuitionistic_eval

__all__ = ["Atom", "alt", "atom", "desugar", "fragment_of", "kernel_form", "Frame",
           "Model", "evaluate", "load_model", "model_from_json", "model_to_json",
           "FormulaSyntaxError", "parse", "to_text", "Verdict", "classical_oracle",
           "decide", "enumerate_posets", "intuitionistic_eval"]
__version__ = "0.1.0"
