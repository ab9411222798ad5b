"""One-sided stable densities and the generalized heat equation.

``g_nu`` is the density on ``(0, inf)`` with Laplace transform
``exp(-s**nu)``, so ``exp(-c p**nu) = int g_nu(xi) exp(-c**(1/nu) p xi) dxi``.
Applied with ``c = t`` and ``nu = 1/n`` to each Fourier mode, this writes the
solution of ``d_t F = -(-d_x^2 + k)**(1/n) F`` as a ``g``-weighted superposition
of ordinary heat flows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate, optimize

from diracfrac.errors import AccuracyError, DomainError
from diracfrac.spectral import RESOLUTION_TOL, SpectralField

METHODS = ("closed_form_half", "series")

# Below this many lost digits of cancellation the series is trusted.
_MAX_SERIES_CONDITION = 1e5
_FLOOR_LEVEL = 1e-16
_NORMALIZATION_SPLIT = 50.0


@dataclass(frozen=True)
class StableDensitySpec:
    nu: Fraction
    method: str = "series"
    series_cap: int = 500
    tail_tol: float = 1e-16

    def __post_init__(self):
        nu = Fraction(self.nu) if not isinstance(self.nu, float) else Fraction(self.nu).limit_denominator(10**6)
        object.__setattr__(self, "nu", nu)
        if not 0 < nu < 1:
            raise DomainError(f"nu must lie in (0, 1), got {nu}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.method == "closed_form_half" and nu != Fraction(1, 2):
            raise ValueError("the closed form exists only for nu = 1/2")

    @classmethod
    def default(cls, nu) -> "StableDensitySpec":
        nu = Fraction(nu)
        return cls(nu, "closed_form_half" if nu == Fraction(1, 2) else "series")


def density_half(xi: float) -> float:
    return xi**-1.5 * math.exp(-1.0 / (4.0 * xi)) / (2.0 * math.sqrt(math.pi))


def density_series(nu: float, xi: float, cap: int = 500, tail_tol: float = 1e-16) -> float:
    """Sum ``-(1/pi) sum_m (-1)^m / m! Gamma(nu m + 1) sin(pi nu m) xi^(-nu m - 1)``.

    Raises AccuracyError when cancellation would cost more than five digits or
    the terms have not decayed below ``tail_tol`` (relative) within ``cap`` terms.
    """
    log_xi = math.log(xi)
    total = 0.0
    magnitude = 0.0
    prev_bound = math.inf
    for m in range(1, cap + 1):
        log_bound = math.lgamma(nu * m + 1) - math.lgamma(m + 1) - (nu * m + 1) * log_xi
        bound = math.exp(log_bound) if log_bound < 700 else math.inf
        term = (-1) ** m * bound * math.sin(math.pi * nu * m)
        total += term
        magnitude += abs(term)
        if bound < prev_bound and bound <= tail_tol * abs(total):
            break
        prev_bound = bound
    else:
        raise AccuracyError(f"series for g_{nu} at xi={xi} did not converge in {cap} terms")
    value = -total / math.pi
    if not math.isfinite(magnitude) or magnitude > _MAX_SERIES_CONDITION * abs(total):
        raise AccuracyError(f"series for g_{nu} at xi={xi} loses too many digits", achieved=magnitude * 1e-16)
    return value


def density_integral(nu: float, xi: float) -> float:
    """Non-oscillatory integral over ``(0, pi)``, accurate at small ``xi``.

    ``g(xi) = nu/(1-nu)/pi * xi^(-1/(1-nu)) int A(phi) exp(-xi^(-nu/(1-nu)) A(phi)) dphi``
    with ``A(phi) = sin(nu phi)^(nu/(1-nu)) sin((1-nu) phi) / sin(phi)^(1/(1-nu))``.
    """
    alpha = 1.0 / (1.0 - nu)
    scale = xi ** (-nu * alpha)

    def integrand(phi):
        amp = math.sin(nu * phi) ** (nu * alpha) * math.sin((1 - nu) * phi) / math.sin(phi) ** alpha
        arg = scale * amp
        return amp * math.exp(-arg) if arg < 745 else 0.0

    val, _ = integrate.quad(integrand, 0.0, math.pi, epsabs=0.0, epsrel=1e-12, limit=200)
    return nu * alpha / math.pi * xi ** (-alpha) * val


def stable_density(spec: StableDensitySpec, xi: float) -> float:
    if not xi > 0:
        raise DomainError(f"g is evaluated at xi > 0, got {xi}")
    nu = float(spec.nu)
    if spec.method == "closed_form_half":
        return density_half(xi)
    if xi < xi_floor(spec.nu):
        return 0.0
    try:
        return max(density_series(nu, xi, spec.series_cap, spec.tail_tol), 0.0)
    except AccuracyError:
        return density_integral(nu, xi)


@lru_cache(maxsize=None)
def xi_floor(nu: Fraction, level: float = _FLOOR_LEVEL) -> float:
    """Point below which the small-xi asymptotic form of ``g_nu`` is under ``level``.

    ``g(xi) ~ C xi^(-(2-nu)/(2(1-nu))) exp(-(1-nu) nu^(nu/(1-nu)) xi^(-nu/(1-nu)))``.
    """
    nu = float(nu)
    c = math.sqrt(nu ** (1 / (1 - nu)) / (2 * math.pi * (1 - nu)))
    rate = (1 - nu) * nu ** (nu / (1 - nu))

    def log_g(log_xi):
        return (math.log(c) - (2 - nu) / (2 * (1 - nu)) * log_xi
                - rate * math.exp(-nu / (1 - nu) * log_xi) - math.log(level))

    return math.exp(optimize.brentq(log_g, -200.0, 0.0))


def _tail_mass(nu: float, x: float, cap: int = 400) -> float:
    """``int_x^inf g_nu`` by integrating the series term by term."""
    total = 0.0
    log_x = math.log(x)
    for m in range(1, cap + 1):
        bound = math.exp(math.lgamma(nu * m + 1) - math.lgamma(m + 1) - nu * m * log_x) / (nu * m)
        total += (-1) ** m * bound * math.sin(math.pi * nu * m)
        if bound < 1e-18:
            break
    return -total / math.pi


@lru_cache(maxsize=None)
def stable_mass(nu: Fraction) -> float:
    """``int_0^inf g_nu``: quadrature on ``(floor, X)`` plus the analytic tail beyond ``X``."""
    spec = StableDensitySpec.default(nu)
    lo, split = xi_floor(spec.nu), _NORMALIZATION_SPLIT
    body = 0.0
    for a, b in _log_panels(lo, split):
        val, _ = integrate.quad(lambda x: stable_density(spec, x), a, b, epsabs=1e-15, epsrel=1e-13, limit=200)
        body += val
    return body + _tail_mass(float(spec.nu), split)


def _log_panels(lo: float, hi: float) -> list[tuple[float, float]]:
    edges = np.geomspace(lo, hi, max(2, int(math.log10(hi / lo)) + 1))
    return list(zip(edges[:-1], edges[1:]))


def _u_to_xi(u):
    return u / (1.0 - u)


def laplace_transform(spec: StableDensitySpec, s: float) -> float:
    """``int g(xi) exp(-s xi) dxi`` in ``log xi`` on decade panels up to ``745 / s``."""
    if s < 0:
        raise DomainError("transform variable must be nonnegative")
    if s == 0:
        return stable_mass(spec.nu)
    if 745.0 / s <= xi_floor(spec.nu):
        return 0.0

    def integrand(y):
        xi = math.exp(y)
        return stable_density(spec, xi) * xi * math.exp(-s * xi)

    val = err = 0.0
    for a, b in _log_panels(xi_floor(spec.nu), 745.0 / s):
        v, e = integrate.quad(integrand, math.log(a), math.log(b), epsabs=1e-15, epsrel=1e-12, limit=200)
        val, err = val + v, err + e
    if err > 1e-8:
        raise AccuracyError(f"Laplace transform at s={s} did not converge", achieved=err)
    return val


def levy_identity_check(nu, c: float, p_grid: Sequence[float], spec: StableDensitySpec | None = None) -> float:
    """Max ``|exp(-c p^nu) - int g_nu(xi) exp(-c^(1/nu) p xi) dxi|`` over ``p_grid``."""
    if c <= 0 or any(p <= 0 for p in p_grid):
        raise DomainError("identity holds for c > 0 and p > 0")
    spec = spec or StableDensitySpec.default(nu)
    nu = float(spec.nu)
    return max(abs(math.exp(-c * p**nu) - laplace_transform(spec, c ** (1 / nu) * p)) for p in p_grid)


# --- generalized heat equation ----------------------------------------------

@dataclass(frozen=True)
class HeatProblem:
    """``d_t F = -(-d_x^2 + k)^(1/n) F`` with ``F(x, 0) = f(x)``."""

    n: int
    k: float
    f: SpectralField
    t: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("root order n must be >= 1")
        if self.k < 0:
            raise DomainError("k must be nonnegative")
        if self.t < 0:
            raise DomainError("t must be nonnegative")


def heat_solve_fourier(problem: HeatProblem) -> SpectralField:
    problem.f.require_resolved(RESOLUTION_TOL)
    p = problem.f.wavenumbers
    symbol = (p**2 + problem.k) ** (1.0 / problem.n)
    return problem.f.with_modes(np.exp(-problem.t * symbol) * problem.f.modes)


def levy_multipliers(nu: Fraction, s: np.ndarray, spec: StableDensitySpec | None = None) -> np.ndarray:
    """``int g_nu(xi) exp(-s xi) dxi`` for every entry of ``s`` at once (adaptive, vector-valued)."""
    spec = spec or StableDensitySpec.default(nu)
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    zero = s == 0
    out[zero] = stable_mass(spec.nu)
    if np.all(zero):
        return out
    sv = s[~zero]
    floor = xi_floor(spec.nu)
    u_lo = floor / (1.0 + floor)

    def integrand(u):
        if u >= 1.0:
            return np.zeros_like(sv)
        xi = _u_to_xi(u)
        g = stable_density(spec, xi)
        return g * np.exp(-sv * xi) / (1.0 - u) ** 2

    # Panels refine the decay scale of every mode so quad_vec starts well placed.
    scales = np.unique(np.concatenate([[floor * 10, 0.1, 1.0], 1.0 / sv, 10.0 / sv]))
    pts = sorted(float(x / (1 + x)) for x in scales if x > floor)
    edges = [u_lo] + [p for p in pts if u_lo < p < 1.0] + [1.0]
    total = np.zeros_like(sv)
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad_vec(integrand, a, b, epsabs=1e-14, epsrel=1e-11, norm="max", limit=2000)
        total += val
    out[~zero] = total
    return out


def heat_solve_levy(problem: HeatProblem, spec: StableDensitySpec | None = None) -> SpectralField:
    """Mode multiplier ``int g_{1/n}(xi) exp(-t^n (k + p^2) xi) dxi``.

    ``exp(t^n xi d_x^2)`` multiplies mode ``p`` by ``exp(-t^n xi p^2)``.
    """
    f = problem.f
    f.require_resolved(RESOLUTION_TOL)
    if problem.t == 0:
        return f
    p = f.wavenumbers
    if problem.n == 1:
        # g_1 is the point mass at 1.
        return f.with_modes(np.exp(-problem.t * (problem.k + p**2)) * f.modes)
    s = problem.t**problem.n * (problem.k + p**2)
    mult = levy_multipliers(Fraction(1, problem.n), s, spec)
    return f.with_modes(mult * f.modes)


def relative_l2(a: SpectralField, b: SpectralField) -> float:
    """``||a - b|| / ||b||``; by Parseval the mode norm equals the grid norm."""
    ref = np.linalg.norm(b.modes)
    return float(np.linalg.norm(a.modes - b.modes) / ref) if ref else float(np.linalg.norm(a.modes))


def compare_heat_solvers(problem: HeatProblem) -> float:
    return relative_l2(heat_solve_levy(problem), heat_solve_fourier(problem))
