"""Roots of unity and small dense complex matrix arithmetic.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every public
function validates shape and finiteness of its inputs and returns a new
array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from diracfrac.errors import DomainError, InvalidOrderError, ShapeError

# Scaled matrices are brought below this Frobenius norm before the series.
_EXP_SCALE_TARGET = 0.5
_EXP_MAX_TERMS = 60
MAX_EXP_DIM = 64


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or 0 in m.shape:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class UnityRoots:
    """The ``n`` roots of unity ``exp(2*pi*i*k/n)`` listed by ``k``."""

    n: int
    roots: np.ndarray

    def __getitem__(self, k: int) -> complex:
        return complex(self.roots[k % self.n])

    def __len__(self) -> int:
        return self.n

    def index_product(self, j: int, k: int) -> int:
        """Index of ``roots[j] * roots[k]``."""
        return (j + k) % self.n

    @property
    def expected_product(self) -> int:
        # The product of all n-th roots is (-1)**(n-1).
        return 1 if self.n % 2 else -1


def unity_roots(n: int) -> UnityRoots:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InvalidOrderError(f"root order must be an integer, got {n!r}")
    if n < 1:
        raise InvalidOrderError(f"root order must be >= 1, got {n}")
    n = int(n)
    k = np.arange(n)
    # Exact values on the axes; cos/sin of multiples of pi/2 are otherwise off by 1e-16.
    roots = np.exp(2j * np.pi * k / n)
    for idx in range(n):
        if (4 * idx) % n == 0:
            roots[idx] = 1j ** ((4 * idx) // n)
    roots.setflags(write=False)
    return UnityRoots(n=n, roots=roots)


def eye(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def mat_pow(a, n: int) -> np.ndarray:
    """Non-negative integer power by repeated squaring."""
    a = _square(a)
    if n < 0:
        raise DomainError("negative powers are not supported")
    result = eye(a.shape[0])
    base = a
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def commutator(a, b) -> np.ndarray:
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise ShapeError(f"commutator of {a.shape} and {b.shape}")
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise ShapeError(f"anticommutator of {a.shape} and {b.shape}")
    return a @ b + b @ a


def frobenius_norm(a) -> float:
    return float(np.sqrt(np.sum(np.abs(as_matrix(a)) ** 2)))


def mat_exp(a) -> np.ndarray:
    """Matrix exponential by scaling and squaring a truncated Taylor series.

    The matrix is halved until its Frobenius norm is at most 0.5, the series
    is summed until the next term is below double precision relative to the
    partial sum, and the result is squared back.
    """
    a = _square(a)
    d = a.shape[0]
    if d > MAX_EXP_DIM:
        raise ShapeError(f"mat_exp supports dimension <= {MAX_EXP_DIM}, got {d}")
    norm = frobenius_norm(a)
    squarings = 0
    if norm > _EXP_SCALE_TARGET:
        squarings = int(math.ceil(math.log2(norm / _EXP_SCALE_TARGET)))
    scaled = a / (2.0**squarings)

    result = eye(d)
    term = eye(d)
    for k in range(1, _EXP_MAX_TERMS):
        term = term @ scaled / k
        result = result + term
        if frobenius_norm(term) <= 1e-18 * frobenius_norm(result):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def residual(a, b) -> float:
    """Frobenius norm of ``a - b``."""
    return frobenius_norm(as_matrix(a) - as_matrix(b))
