"""First-order matrix system for ``d_t^n F = (d_x^n + a^n) F``, solved mode by mode.

On the Fourier mode ``exp(i p x)`` the system ``d_t Phi = (tau1 d_x + a tau2) Phi``
has the constant generator ``G(p) = i p tau1 + a tau2`` with
``G(p)**n = ((i p)**n + a**n) I``, so every component of ``Phi`` obeys the
n-th order equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from diracfrac.algebra import commutator, frobenius_norm, mat_exp
from diracfrac.errors import AccuracyError
from diracfrac.families import tau_matrices
from diracfrac.spectral import RESOLUTION_TOL, SpectralField

METHODS = ("exact", "bch1")


@dataclass(frozen=True)
class VectorSpectralField:
    """``n`` periodic fields on a shared grid; ``modes`` has shape ``(n, N)``."""

    length: float
    modes: np.ndarray

    def __post_init__(self):
        modes = np.asarray(self.modes, dtype=complex)
        if modes.ndim != 2:
            raise ValueError("modes must have shape (n, N)")
        object.__setattr__(self, "modes", modes)

    @property
    def n(self) -> int:
        return self.modes.shape[0]

    @property
    def n_grid(self) -> int:
        return self.modes.shape[1]

    @property
    def components(self) -> list[SpectralField]:
        return [SpectralField(self.length, row) for row in self.modes]

    @property
    def wavenumbers(self) -> np.ndarray:
        return self.components[0].wavenumbers

    @classmethod
    def replicate(cls, field: SpectralField, n: int) -> "VectorSpectralField":
        """All ``n`` components equal to ``field``."""
        return cls(field.length, np.tile(field.modes, (n, 1)))

    @classmethod
    def stack(cls, fields: Sequence[SpectralField]) -> "VectorSpectralField":
        lengths = {f.length for f in fields}
        if len(lengths) != 1:
            raise ValueError("components must share a grid")
        return cls(fields[0].length, np.stack([f.modes for f in fields]))


@dataclass(frozen=True)
class PropagatorSpec:
    n: int
    a: float
    t: float
    method: str = "exact"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("order n must be >= 2")
        if not math.isfinite(self.t):
            raise ValueError("t must be finite")
        if self.a < 0:
            raise ValueError("a must be nonnegative")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")


def mode_generator(n: int, a: float, p: float) -> np.ndarray:
    t1, t2 = tau_matrices(n)
    return 1j * p * t1 + a * t2


def exact_propagator(n: int, a: float, p: float, t: float) -> np.ndarray:
    return mat_exp(t * mode_generator(n, a, p))


def bch1_propagator(n: int, a: float, p: float, t: float) -> np.ndarray:
    """``exp(t i p tau1) exp(t a tau2) exp(-(a t^2 / 2) i p [tau1, tau2])``."""
    t1, t2 = tau_matrices(n)
    return (
        mat_exp(t * 1j * p * t1)
        @ mat_exp(t * a * t2)
        @ mat_exp(-(a * t * t / 2) * 1j * p * commutator(t1, t2))
    )


def propagator(spec: PropagatorSpec, p: float) -> np.ndarray:
    if spec.method == "exact":
        return exact_propagator(spec.n, spec.a, p, spec.t)
    return bch1_propagator(spec.n, spec.a, p, spec.t)


def evolve(phi0: VectorSpectralField, spec: PropagatorSpec, check_resolution: bool = True) -> VectorSpectralField:
    if phi0.n != spec.n:
        raise ValueError(f"field has {phi0.n} components, propagator order is {spec.n}")
    if check_resolution:
        for comp in phi0.components:
            comp.require_resolved(RESOLUTION_TOL)
    out = np.empty_like(phi0.modes)
    for idx, p in enumerate(phi0.wavenumbers):
        out[:, idx] = propagator(spec, p) @ phi0.modes[:, idx]
    return VectorSpectralField(phi0.length, out)


def bch_error_scan(n: int, a: float, p: float, ts: Sequence[float]) -> tuple[list[tuple[float, float]], float]:
    """Residuals ``||U_exact - U_bch1||_F`` and their least-squares log-log slope.

    The slope is ``nan`` when fewer than two residuals are above rounding level.
    """
    rows = [(float(t), frobenius_norm(exact_propagator(n, a, p, t) - bch1_propagator(n, a, p, t))) for t in ts]
    fit = [(t, r) for t, r in rows if r > 1e-14 and t > 0]
    if len(fit) < 2:
        return rows, float("nan")
    slope = np.polyfit(np.log([t for t, _ in fit]), np.log([r for _, r in fit]), 1)[0]
    return rows, float(slope)


def stencil_step(n: int, a: float, p: float, scale: float = 1e-2) -> float:
    rate = (abs(p) ** n + a**n) ** (1.0 / n)
    return scale * min(1.0, 1.0 / rate) if rate > 0 else scale


def component_equation_check(phi0: VectorSpectralField, spec: PropagatorSpec, component: int = 0,
                             mass_tol: float = 1e-8, step_scale: float = 1e-2) -> float:
    """Max relative error of ``d_t^n Phi_c = ((i p)^n + a^n) Phi_c`` over significant modes.

    The n-th time derivative uses the central difference on the ``n + 1``
    points ``t + (n/2 - j) h``, which is second-order accurate, with
    ``h = step_scale * min(1, 1 / (|p|^n + a^n)^(1/n))``. Errors are relative
    to ``(|p|^n + a^n) * max_c |Phi_c(p, t)|``.
    """
    n, a, t = spec.n, spec.a, spec.t
    weights = [(-1) ** j * math.comb(n, j) for j in range(n + 1)]
    modes = phi0.modes[component]
    power = np.abs(modes) ** 2
    significant = power >= mass_tol * power.sum()
    worst = 0.0
    for idx, p in enumerate(phi0.wavenumbers):
        if not significant[idx]:
            continue
        scale = abs(p) ** n + a**n
        if scale == 0:
            continue
        h = stencil_step(n, a, p, step_scale)
        if h**n < 1e-30:
            raise AccuracyError(f"stencil step {h:g} underflows for n={n}")
        vec = phi0.modes[:, idx]
        deriv = sum(w * (exact_propagator(n, a, p, t + (n / 2 - j) * h) @ vec)[component]
                    for j, w in enumerate(weights)) / h**n
        state = exact_propagator(n, a, p, t) @ vec
        want = ((1j * p) ** n + a**n) * state[component]
        denom = scale * np.max(np.abs(state))
        worst = max(worst, abs(deriv - want) / denom)
    return float(worst)
