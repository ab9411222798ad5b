"""Root-of-unity matrix factorizations of n-th roots and their use on fractional operators."""

from diracfrac.algebra import (
    UnityRoots,
    commutator,
    frobenius_norm,
    mat_exp,
    mat_mul,
    mat_pow,
    unity_roots,
)
from diracfrac.errors import (
    AccuracyError,
    DomainError,
    InvalidOrderError,
    PoleError,
    ResolutionError,
    ShapeError,
)

__all__ = [
    "AccuracyError",
    "DomainError",
    "InvalidOrderError",
    "PoleError",
    "ResolutionError",
    "ShapeError",
    "UnityRoots",
    "commutator",
    "frobenius_norm",
    "mat_exp",
    "mat_mul",
    "mat_pow",
    "unity_roots",
]

__version__ = "0.1.0"
