# -*- coding: utf-8 -*-
"""
torusdiv - divisibility of F1(g1^n) and F2(g2^n) over the S-integers.

This package decides and certifies divisibility relations between values of
linear recurrences attached to points of linear tori: exact arithmetic,
integer lattices, Laurent polynomials, power sums, evidence scans, three
certificate constructions and counting functions of lattice zero sets.
"""

__version__ = "1.0.0"
__author__ = "torusdiv developers"

from .arith import FactoredRational, PrimeSet, is_s_integer, is_s_unit, s_divides, s_support
from .factor_engine import FactorizationError, Factorizer, FactorSettings, factor
from .lattice import IntMatrix, hnf, lattice_invariants, saturation_index, snf, solve_integral
from .multgroup import GroupBasis, express, group_basis, is_independent, power_index
from .laurent import (
    LaurentPoly,
    exact_divide,
    monomial_map,
    monomial_substitute,
    omit_variables,
    parse,
    reduce_at,
    stabilizer,
)
from .powersum import PowerSum, divide, eval_at, roots_group, subsample, to_laurent
from .divisor import (
    ProblemInstance,
    extend_s,
    hypothesis_check,
    scan_ideal_inclusion,
    scan_support_inclusion,
    torsion_reduce,
    unity_points_scan,
)
from .certificates import (
    Diagnostic,
    DiagnosticCode,
    GeneCertificate,
    MorphismCertificate,
    bbs_conclusion,
    certify_gene,
    certify_morphism,
    erdos,
)
from .counting import LatticeZeroSet, counting_function, growth_fit, unreduced_count

__all__ = [
    "FactoredRational",
    "PrimeSet",
    "is_s_integer",
    "is_s_unit",
    "s_divides",
    "s_support",
    "FactorizationError",
    "Factorizer",
    "FactorSettings",
    "factor",
    "IntMatrix",
    "hnf",
    "snf",
    "lattice_invariants",
    "saturation_index",
    "solve_integral",
    "GroupBasis",
    "group_basis",
    "express",
    "is_independent",
    "power_index",
    "LaurentPoly",
    "parse",
    "exact_divide",
    "monomial_map",
    "monomial_substitute",
    "omit_variables",
    "reduce_at",
    "stabilizer",
    "PowerSum",
    "divide",
    "eval_at",
    "roots_group",
    "subsample",
    "to_laurent",
    "ProblemInstance",
    "extend_s",
    "hypothesis_check",
    "scan_ideal_inclusion",
    "scan_support_inclusion",
    "torsion_reduce",
    "unity_points_scan",
    "Diagnostic",
    "DiagnosticCode",
    "GeneCertificate",
    "MorphismCertificate",
    "bbs_conclusion",
    "certify_gene",
    "certify_morphism",
    "erdos",
    "LatticeZeroSet",
    "counting_function",
    "growth_fit",
    "unreduced_count",
]
