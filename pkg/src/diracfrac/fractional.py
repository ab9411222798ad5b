"""Riemann-Liouville derivatives of power series on rational exponent grids.

The derivative of order ``nu`` maps ``x**mu`` to
``Gamma(mu + 1) / Gamma(mu - nu + 1) * x**(mu - nu)``. When the denominator
gamma sits on a pole the coefficient is exactly zero; this is how two half
derivatives of a constant vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from diracfrac.errors import DomainError, PoleError
from diracfrac.families import lambda_matrices, pauli


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


def _is_pole(x) -> bool:
    return x <= 0 and x == int(x)


def gamma(x: float) -> float:
    """Gamma function; reflection formula for negative arguments.

    Raises PoleError at nonpositive integers.
    """
    if _is_pole(x):
        raise PoleError(f"gamma has a pole at {x}")
    x = float(x)
    if x > 0:
        return math.gamma(x)
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def rgamma(x) -> float:
    """Reciprocal gamma, continued by zero at the poles."""
    if _is_pole(x):
        return 0.0
    return 1.0 / gamma(x)


@dataclass(frozen=True)
class MonomialExpansion:
    """Finite sum ``sum_mu c_mu * x**mu`` with rational exponents ``mu > -1``.

    Equivalent view: base exponent ``mu0``, grid step ``1/q`` and
    coefficients keyed by integer offsets ``k`` with exponent ``mu0 + k/q``.
    """

    terms: Mapping[Fraction, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mu, c in self.terms.items():
            mu, c = _as_fraction(mu), complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise DomainError(f"non-finite coefficient for x^{mu}")
            if c == 0:
                continue
            if mu <= -1:
                raise DomainError(f"exponent {mu} <= -1 with nonzero coefficient")
            clean[mu] = clean.get(mu, 0) + c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, mu, coeff: complex = 1.0) -> "MonomialExpansion":
        return cls({_as_fraction(mu): coeff})

    @property
    def mu0(self) -> Fraction:
        return min(self.terms) if self.terms else Fraction(0)

    @property
    def q(self) -> int:
        q = 1
        for mu in self.terms:
            q = math.lcm(q, (mu - self.mu0).denominator, mu.denominator)
        return q

    @property
    def coeffs(self) -> dict[int, complex]:
        q, mu0 = self.q, self.mu0
        return {int((mu - mu0) * q): c for mu, c in self.terms.items()}

    def __add__(self, other: "MonomialExpansion") -> "MonomialExpansion":
        out = dict(self.terms)
        for mu, c in other.terms.items():
            out[mu] = out.get(mu, 0) + c
        return MonomialExpansion(out)

    def __sub__(self, other: "MonomialExpansion") -> "MonomialExpansion":
        return self + other.scale(-1)

    def scale(self, alpha: complex) -> "MonomialExpansion":
        return MonomialExpansion({mu: alpha * c for mu, c in self.terms.items()})

    def __call__(self, x: float) -> complex:
        if x <= 0:
            raise DomainError("expansions are evaluated at x > 0")
        return sum(c * x ** float(mu) for mu, c in self.terms.items())


def _deriv_terms(expansion: MonomialExpansion, nu: Fraction) -> tuple[dict[Fraction, complex], int]:
    out: dict[Fraction, complex] = {}
    poles = 0
    for mu, c in expansion.terms.items():
        inv = rgamma(mu - nu + 1)
        if inv == 0.0:
            poles += 1
            continue
        new_mu = mu - nu
        if new_mu <= -1:
            raise DomainError(f"derivative of order {nu} sends x^{mu} to x^{new_mu}, below the domain")
        out[new_mu] = out.get(new_mu, 0) + c * gamma(mu + 1) * inv
    return out, poles


def frac_deriv(expansion: MonomialExpansion, order) -> MonomialExpansion:
    """Term-by-term Riemann-Liouville derivative of rational order ``order``."""
    terms, _ = _deriv_terms(expansion, _as_fraction(order))
    return MonomialExpansion(terms)


def pole_count(expansion: MonomialExpansion, order) -> int:
    """Number of terms ``frac_deriv`` annihilates through a denominator pole."""
    return _deriv_terms(expansion, _as_fraction(order))[1]


# --- operator matrices ------------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrix:
    """Square matrix whose entries are combinations ``sum_nu c_nu D**nu``.

    Each entry maps derivative order (``0`` for plain multiplication) to its
    complex multiplier.
    """

    entries: tuple[tuple[Mapping[Fraction, complex], ...], ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    @classmethod
    def from_parts(cls, parts: Sequence[tuple[Fraction, complex, np.ndarray]]) -> "OperatorMatrix":
        """Build ``sum order/scalar/matrix`` terms, e.g. ``D**(1/2) sigma_j + sqrt(a) sigma_k``."""
        d = parts[0][2].shape[0]
        grid: list[list[dict]] = [[{} for _ in range(d)] for _ in range(d)]
        for nu, scalar, mat in parts:
            nu = _as_fraction(nu)
            for r in range(d):
                for c in range(d):
                    v = complex(scalar) * complex(mat[r, c])
                    if v != 0:
                        grid[r][c][nu] = grid[r][c].get(nu, 0) + v
        return cls(tuple(tuple(row) for row in grid))

    def apply(self, vector: Sequence[MonomialExpansion]) -> list[MonomialExpansion]:
        if len(vector) != self.dim:
            raise ValueError(f"vector of length {len(vector)} for a {self.dim}x{self.dim} operator")
        out = []
        for row in self.entries:
            acc = MonomialExpansion()
            for entry, f in zip(row, vector):
                for nu, mult in entry.items():
                    g = f if nu == 0 else frac_deriv(f, nu)
                    acc = acc + g.scale(mult)
            out.append(acc)
        return out

    def evaluate(self, x: float) -> np.ndarray:
        """Numeric matrix with every ``D**nu`` replaced by its image of the constant 1.

        ``D**nu 1 = x**(-nu) / Gamma(1 - nu)``, e.g. ``1/sqrt(pi x)`` for ``nu = 1/2``.
        """
        if x <= 0:
            raise DomainError("evaluation point must be positive")
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for r, row in enumerate(self.entries):
            for c, entry in enumerate(row):
                for nu, mult in entry.items():
                    m[r, c] += mult * (1.0 if nu == 0 else x ** (-float(nu)) * rgamma(1 - nu))
        return m


KINDS = ("O_half", "O_third")


def _kind(kind: str) -> str:
    aliases = {"half": "O_half", "third": "O_third"}
    kind = aliases.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown operator kind {kind!r}")
    return kind


def root_order(kind: str) -> int:
    return 2 if _kind(kind) == "O_half" else 3


def assemble_operator(kind: str, a: float, j: int = 1, k: int = 2) -> OperatorMatrix:
    """Matrix form of ``(d/dx + a)**(1/2)`` or ``(d/dx + a)**(1/3)``.

    ``O_half`` is ``D**(1/2) sigma_j + sqrt(a) sigma_k`` with 1-based Pauli
    indices ``j != k``; ``O_third`` is ``D**(1/3) lambda_1 + a**(1/3) lambda_2``.
    """
    kind = _kind(kind)
    if isinstance(a, complex) or a < 0:
        raise DomainError("a must be real and nonnegative")
    if kind == "O_half":
        if j == k:
            raise IndexError("Pauli indices must differ")
        if not (1 <= j <= 3 and 1 <= k <= 3):
            raise IndexError("Pauli indices must be in 1..3")
        s = pauli()
        return OperatorMatrix.from_parts([(Fraction(1, 2), 1.0, s[j - 1]), (Fraction(0), math.sqrt(a), s[k - 1])])
    l1, l2, _ = lambda_matrices()
    return OperatorMatrix.from_parts([(Fraction(1, 3), 1.0, l1), (Fraction(0), a ** (1.0 / 3.0), l2)])


@dataclass
class PowerCheckReport:
    max_error: float
    per_exponent: dict[Fraction, float]
    pole_terms: int

    @property
    def pole_convention_triggered(self) -> bool:
        return self.pole_terms > 0


def _max_rel_error(got: MonomialExpansion, want: MonomialExpansion) -> float:
    keys = set(got.terms) | set(want.terms)
    if not keys:
        return 0.0
    scale = max((abs(c) for c in want.terms.values()), default=0.0) or 1.0
    return max(abs(got.terms.get(mu, 0) - want.terms.get(mu, 0)) for mu in keys) / scale


def operator_power_check_report(kind: str, a: float, exponents: Sequence, n: int | None = None,
                                j: int = 1, k: int = 2) -> PowerCheckReport:
    kind = _kind(kind)
    n = root_order(kind) if n is None else n
    op = assemble_operator(kind, a, j, k)
    d = op.dim
    per_exp: dict[Fraction, float] = {}
    poles = 0
    for mu in exponents:
        mu = _as_fraction(mu)
        f = MonomialExpansion.monomial(mu)
        want = frac_deriv(f, 1) + f.scale(a)
        worst = 0.0
        for comp in range(d):
            vec = [f if r == comp else MonomialExpansion() for r in range(d)]
            for _ in range(n):
                for entry_row in op.entries:
                    for entry, g in zip(entry_row, vec):
                        poles += sum(pole_count(g, nu) for nu in entry if nu != 0)
                vec = op.apply(vec)
            for r in range(d):
                target = want if r == comp else MonomialExpansion()
                worst = max(worst, _max_rel_error(vec[r], target) if want.terms else
                            max((abs(c) for c in vec[r].terms.values()), default=0.0))
        per_exp[mu] = worst
    return PowerCheckReport(max(per_exp.values(), default=0.0), per_exp, poles)


def operator_power_check(kind: str, a: float, exponents: Sequence, n: int | None = None,
                         j: int = 1, k: int = 2) -> float:
    """Max relative coefficient error of ``O**n x**mu`` against ``(d/dx + a) x**mu``.

    The operator acts in operator form (derivative symbols act through
    ``frac_deriv``) on each basis vector ``x**mu e_c`` in turn.
    """
    return operator_power_check_report(kind, a, exponents, n, j, k).max_error
