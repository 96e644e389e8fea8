"""Controller synthesis for HyperLTL specifications over finite plants."""

from .errors import HypersynthError
from .formula import (
    Formula,
    FragmentClass,
    FragmentKind,
    Quantifier,
    alternation_count,
    classify_fragment,
    desugar,
    negate_nnf,
)
from .parser import parse, parse_body, print_body, print_formula
from .plant import (
    FrameKind,
    Lasso,
    Plant,
    classify_frame,
    dump_plant,
    enumerate_lassos,
    enumerate_traces,
    lasso_equal,
    load_plant,
    validate,
)
from .semantics import CheckResult, check, eval_body, eval_quantified
from .synth import (
    ControllerSolution,
    SynthesisResult,
    Verdict,
    apply_solution,
    dispatch,
    synth_generic,
    synth_tree_exists_forall,
    synth_tree_marking,
)

__all__ = [
    "CheckResult",
    "ControllerSolution",
    "Formula",
    "FragmentClass",
    "FragmentKind",
    "FrameKind",
    "HypersynthError",
    "Lasso",
    "Plant",
    "Quantifier",
    "SynthesisResult",
    "Verdict",
    "alternation_count",
    "apply_solution",
    "check",
    "classify_fragment",
    "classify_frame",
    "desugar",
    "dispatch",
    "dump_plant",
    "enumerate_lassos",
    "enumerate_traces",
    "eval_body",
    "eval_quantified",
    "lasso_equal",
    "load_plant",
    "negate_nnf",
    "parse",
    "parse_body",
    "print_body",
    "print_formula",
    "synth_generic",
    "synth_tree_exists_forall",
    "synth_tree_marking",
    "validate",
]

__version__ = "0.1.0"
