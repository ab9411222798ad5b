"""Periodic 1-D fields stored as Fourier coefficients."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from diracfrac.errors import ResolutionError

RESOLUTION_TOL = 1e-10


def _check_grid(n_grid: int) -> None:
    if n_grid < 2 or n_grid & (n_grid - 1):
        raise ValueError(f"grid size must be a power of two >= 2, got {n_grid}")


def mode_indices(n_grid: int) -> np.ndarray:
    return np.arange(-n_grid // 2, n_grid // 2)


@dataclass(frozen=True)
class SpectralField:
    """Field ``f(x) = sum_m modes[m] exp(i p_m x)`` on ``[0, length)``.

    ``modes`` is ordered by ascending ``m`` from ``-N/2`` to ``N/2 - 1``, with
    ``p_m = 2 pi m / length``.
    """

    length: float
    modes: np.ndarray

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("period must be positive")
        modes = np.asarray(self.modes, dtype=complex)
        _check_grid(modes.shape[-1])
        object.__setattr__(self, "modes", modes)

    @property
    def n_grid(self) -> int:
        return self.modes.shape[-1]

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * mode_indices(self.n_grid) / self.length

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.n_grid) * self.length / self.n_grid

    @classmethod
    def from_samples(cls, values, length: float) -> "SpectralField":
        values = np.asarray(values, dtype=complex)
        return cls(length, np.fft.fftshift(np.fft.fft(values)) / values.size)

    def samples(self) -> np.ndarray:
        return np.fft.ifft(np.fft.ifftshift(self.modes)) * self.n_grid

    def with_modes(self, modes) -> "SpectralField":
        return SpectralField(self.length, modes)

    def top_quarter_mass(self) -> float:
        """Fraction of spectral mass in the outer quarter of the mode range."""
        m = mode_indices(self.n_grid)
        power = np.abs(self.modes) ** 2
        total = power.sum()
        if total == 0:
            return 0.0
        return float(power[np.abs(m) >= 3 * self.n_grid // 8].sum() / total)

    def require_resolved(self, tol: float = RESOLUTION_TOL) -> None:
        frac = self.top_quarter_mass()
        if frac >= tol:
            raise ResolutionError(f"top-quarter spectral mass fraction {frac:.3g} >= {tol:g}")

    def hermitian_defect(self) -> float:
        """Max ``|F(-p) - conj(F(p))|``; zero for real fields (Nyquist mode excluded)."""
        half = self.n_grid // 2
        pos = self.modes[half + 1:]
        neg = self.modes[1:half][::-1]
        return float(np.max(np.abs(neg - np.conj(pos)), initial=0.0))


def gaussian(n_grid: int = 256, length: float = 20.0, sigma: float = 1.0, center: float | None = None) -> SpectralField:
    """Periodic Gaussian ``exp(-(x - center)^2 / (2 sigma^2))``, centered at ``length/2`` by default."""
    _check_grid(n_grid)
    center = length / 2 if center is None else center
    x = np.arange(n_grid) * length / n_grid
    return SpectralField.from_samples(np.exp(-((x - center) ** 2) / (2 * sigma**2)), length)


def single_mode(m: int, n_grid: int = 256, length: float = 20.0, amplitude: complex = 1.0) -> SpectralField:
    modes = np.zeros(n_grid, dtype=complex)
    modes[m + n_grid // 2] = amplitude
    return SpectralField(length, modes)


def parse_init(spec: str, n_grid: int, length: float) -> SpectralField:
    """Parse ``gaussian:sigma=1[,center=c]`` or ``mode:m=3`` initial data."""
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, value = item.partition("=")
        params[key.strip()] = float(value)
    if kind == "gaussian":
        unknown = set(params) - {"sigma", "center"}
        if unknown:
            raise ValueError(f"unknown gaussian parameters: {sorted(unknown)}")
        return gaussian(n_grid, length, params.get("sigma", 1.0), params.get("center"))
    if kind == "mode":
        if set(params) - {"m"}:
            raise ValueError("mode initial data takes only m")
        return single_mode(int(params.get("m", 1)), n_grid, length)
    raise ValueError(f"unknown initial data kind {kind!r}")
