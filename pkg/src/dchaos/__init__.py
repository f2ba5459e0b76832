"""Finite witnesses for distributional chaos of weighted shifts and circle composition operators."""

from .chaos import Block, Certificate, example_certificate, verify_certificate
from .density import IndexSet, density_profile, merge_density_one
from .kernels import BACKEND
from .mobius import Arc, MobiusMap, arc_preimage, classify, ddc_verdict, iterate
from .shifts import ShiftOperator, SimpleFunction, count_at_least, near_zero_profile, orbit_norm_p, ratio_sequence
from .weights import WeightSequence

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BACKEND",
    "Block",
    "Certificate",
    "IndexSet",
    "MobiusMap",
    "ShiftOperator",
    "SimpleFunction",
    "WeightSequence",
    "arc_preimage",
    "classify",
    "count_at_least",
    "ddc_verdict",
    "density_profile",
    "example_certificate",
    "iterate",
    "merge_density_one",
    "near_zero_profile",
    "orbit_norm_p",
    "ratio_sequence",
    "verify_certificate",
]
