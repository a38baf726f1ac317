"""Labelled tableau prover for flat conditional formulas, with a sphere-model oracle."""
from .engine import FragmentError, ProverConfig, Verdict, prove
from .formula import (
    F,
    T,
    Formula,
    FormulaSyntaxError,
    SignedFormula,
    check_flat_fragment,
    classify,
    conjugate,
    is_top,
    parse,
    to_text,
    truth_table_equiv,
)
from .keplus import detect_tautology, equivalent, v_sets
from .semantics import Countermodel, SOSModel, evaluate, find_countermodel

__all__ = [
    "Countermodel",
    "F",
    "Formula",
    "FormulaSyntaxError",
    "FragmentError",
    "ProverConfig",
    "SOSModel",
    "SignedFormula",
    "T",
    "Verdict",
    "check_flat_fragment",
    "classify",
    "conjugate",
    "detect_tautology",
    "equivalent",
    "evaluate",
    "find_countermodel",
    "is_top",
    "parse",
    "prove",
    "to_text",
    "truth_table_equiv",
    "v_sets",
]
