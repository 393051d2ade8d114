"""Exact four-colouring counts of spherical triangulations by sweeping tensor networks."""

from .gaussian import GaussInt, Intertwiner
from .holonomy import TensorState, apply_deletion, apply_insertion, run_sweep
from .penrose import chromatic_index, count_good, enumerate_good, literal_sum
from .replab import calibrate, equivariance_check
from .section import build_section, nonvanishing_certificate, transport
from .surface import Triangulation, dualize, load, preset, random_sphere, validate
from .sweep import SweepPlan, plan_best, plan_sweep, verify_plan

__version__ = "0.1.0"

__all__ = [
    "GaussInt",
    "Intertwiner",
    "TensorState",
    "apply_deletion",
    "apply_insertion",
    "run_sweep",
    "chromatic_index",
    "count_good",
    "enumerate_good",
    "literal_sum",
    "calibrate",
    "equivariance_check",
    "build_section",
    "nonvanishing_certificate",
    "transport",
    "Triangulation",
    "dualize",
    "load",
    "preset",
    "random_sphere",
    "validate",
    "SweepPlan",
    "plan_best",
    "plan_sweep",
    "verify_plan",
]
