"""The four-stage degeneration cascade and its limit-verification harness."""
from .build import build_stage, nd_to_1d
from .harness import ConvergenceReport, estimate_additive_constant, verify_limit
from .params import STAGE_SHIFTS, DegenParams, StageShift, trig_modulus

__all__ = [
    "DegenParams", "StageShift", "STAGE_SHIFTS", "trig_modulus",
    "build_stage", "nd_to_1d",
    "ConvergenceReport", "verify_limit", "estimate_additive_constant",
]
