"""Exact computations around interpolation sets, separability by torus
rotations, Bohr recurrence, two-step witnesses and Riesz products."""

__version__ = "0.1.0"

from .exact_arith import CircleInterval, TorusPoint, parse_rational, set_dist, torus_dist
from .index_sets import GeneratorSpec, IndexSet, generate
from .interpolation import build_interpolant, verify_interpolation
from .recurrence import partition_bohr, recurrence_threshold, supmin_1d
from .riesz import sigma_hat, to_balanced_ternary
from .separability import separability_1d, separability_nd

__all__ = [
    "CircleInterval",
    "GeneratorSpec",
    "IndexSet",
    "TorusPoint",
    "build_interpolant",
    "generate",
    "parse_rational",
    "partition_bohr",
    "recurrence_threshold",
    "separability_1d",
    "separability_nd",
    "set_dist",
    "sigma_hat",
    "supmin_1d",
    "to_balanced_ternary",
    "torus_dist",
    "verify_interpolation",
]
