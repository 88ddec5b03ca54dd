"""Singularities of fibers of cluster algebras with principal coefficients."""

from .algebra import Fp, MultiPoly, VarRegistry, has_cube_root, is_square
from .classifier import CoefficientPoint, SingularityReport, Verdict, classify, stratify
from .presentations import (
    Presentation,
    bfz_presentation,
    continuant,
    gen_to_prin_witness,
    lambda_term,
    reduced_presentation,
    reduction_witness,
    verify_gen_to_prin,
    verify_reduction,
)
from .seeds import ExtendedExchangeMatrix, LabeledSeed, dynkin_seed, mutate_matrix, mutate_seed

__all__ = [
    "CoefficientPoint",
    "ExtendedExchangeMatrix",
    "Fp",
    "LabeledSeed",
    "MultiPoly",
    "Presentation",
    "SingularityReport",
    "VarRegistry",
    "Verdict",
    "bfz_presentation",
    "classify",
    "continuant",
    "dynkin_seed",
    "gen_to_prin_witness",
    "has_cube_root",
    "is_square",
    "lambda_term",
    "mutate_matrix",
    "mutate_seed",
    "reduced_presentation",
    "reduction_witness",
    "stratify",
    "verify_gen_to_prin",
    "verify_reduction",
]
