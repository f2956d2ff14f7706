"""Approximate vertex enumeration of H-polytopes in exact or float arithmetic."""
from .addm import addm_run, core_addm
from .common import ApproxVRep, HashedPartition, IdRegistry, ScriptPartition
from .ga import core_ga, ga_run
from .hrep import HPolytope, canonical_form
from .numerics import FLOAT, RATIONAL
from .pipeline import approximate, canonicalize
from .verify import brute_force_vertices, check_sandwich, float_error_audit

__version__ = "0.1.0"

__all__ = [
    "ApproxVRep",
    "FLOAT",
    "HPolytope",
    "HashedPartition",
    "IdRegistry",
    "RATIONAL",
    "ScriptPartition",
    "addm_run",
    "approximate",
    "brute_force_vertices",
    "canonical_form",
    "canonicalize",
    "check_sandwich",
    "core_addm",
    "core_ga",
    "float_error_audit",
    "ga_run",
]
