import math

import numpy as np
import pytest

from diracfrac.algebra import frobenius_norm, mat_pow
from diracfrac.errors import ResolutionError
from diracfrac.evolution import (
    PropagatorSpec,
    VectorSpectralField,
    bch1_propagator,
    bch_error_scan,
    component_equation_check,
    evolve,
    exact_propagator,
    mode_generator,
)
from diracfrac.families import tau_matrices
from diracfrac.spectral import SpectralField, gaussian, single_mode


def taylor_exp(a, terms=60):
    out = np.eye(a.shape[0], dtype=complex)
    term = out.copy()
    for k in range(1, terms):
        term = term @ a / k
        out += term
    return out


def test_mode_generator_examples():
    assert frobenius_norm(mode_generator(3, 0.0, 0.0)) == 0
    np.testing.assert_array_equal(mode_generator(3, 1.0, 0.0), tau_matrices(3)[1])
    g = mode_generator(3, 1.0, 1.0)
    np.testing.assert_allclose(g, 1j * tau_matrices(3)[0] + tau_matrices(3)[1])
    np.testing.assert_allclose(mat_pow(g, 3), (1 - 1j) * np.eye(3), atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0])
def test_mode_factorization_across_grid(n, a):
    for p in gaussian().wavenumbers:
        g = mode_generator(n, a, p)
        expected = ((1j * p) ** n + a**n) * np.eye(n)
        assert frobenius_norm(mat_pow(g, n) - expected) <= 1e-10 * max(1.0, abs(p) ** n)


def test_exact_matches_series_oracle():
    u = exact_propagator(2, 1.0, 1.0, 0.1)
    ref = taylor_exp(0.1 * mode_generator(2, 1.0, 1.0))
    assert frobenius_norm(u - ref) <= 1e-12


@pytest.mark.parametrize("method", ["exact", "bch1"])
def test_zero_time_is_identity(method):
    phi0 = VectorSpectralField.replicate(gaussian(), 3)
    out = evolve(phi0, PropagatorSpec(3, 1.0, 0.0, method))
    np.testing.assert_array_equal(out.modes, phi0.modes)


def test_methods_coincide_without_shift():
    phi0 = VectorSpectralField.replicate(gaussian(), 3)
    a = evolve(phi0, PropagatorSpec(3, 0.0, 0.7, "exact"))
    b = evolve(phi0, PropagatorSpec(3, 0.0, 0.7, "bch1"))
    np.testing.assert_allclose(a.modes, b.modes, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_flow_property(n):
    phi0 = VectorSpectralField.replicate(gaussian(), n)
    t1, t2 = 0.3, -0.45
    two = evolve(evolve(phi0, PropagatorSpec(n, 1.0, t1)), PropagatorSpec(n, 1.0, t2))
    one = evolve(phi0, PropagatorSpec(n, 1.0, t1 + t2))
    assert np.max(np.linalg.norm(two.modes - one.modes, axis=0)) <= 1e-10


def test_grid_refinement_stable():
    coarse = VectorSpectralField.replicate(gaussian(128), 3)
    fine = VectorSpectralField.replicate(gaussian(256), 3)
    spec = PropagatorSpec(3, 1.0, 0.8)
    a = evolve(coarse, spec).modes
    b = evolve(fine, spec).modes[:, 64:192]
    assert np.max(np.abs(a - b)) <= 1e-12


def test_resolution_guard():
    rough = SpectralField(20.0, np.ones(64))
    with pytest.raises(ResolutionError):
        evolve(VectorSpectralField.replicate(rough, 2), PropagatorSpec(2, 1.0, 0.1))


def test_bch_scan_zero_shift():
    rows, _ = bch_error_scan(3, 0.0, 2.0, np.geomspace(1e-3, 1e-1, 5))
    assert all(r <= 1e-14 for _, r in rows)


@pytest.mark.parametrize("n,p", [(2, 1.0), (2, 2.0), (3, 1.0), (3, 2.0), (4, 1.5), (5, 0.5)])
def test_bch_scan_slope(n, p):
    _, slope = bch_error_scan(n, 1.0, p, np.geomspace(1e-4, 1e-2, 9))
    assert 2.9 <= slope <= 3.1


def test_bch_two_decade_upper_window():
    _, slope = bch_error_scan(2, 1.0, 1.0, np.geomspace(1e-3, 1e-1, 9))
    assert 2.9 <= slope <= 3.1


def test_bch_propagator_first_order_agreement():
    for t in (1e-3, 1e-2):
        diff = frobenius_norm(exact_propagator(3, 1.0, 1.0, t) - bch1_propagator(3, 1.0, 1.0, t))
        assert diff <= 10 * t**3


def test_component_equation_single_mode_wave():
    # Exact single-mode solution exp(+-ipt): the O(h^2) stencil with step 1e-3/|p| stays below 1e-6.
    phi0 = VectorSpectralField.replicate(single_mode(3), 2)
    assert component_equation_check(phi0, PropagatorSpec(2, 0.0, 0.5), step_scale=1e-3) <= 1e-6
    assert component_equation_check(phi0, PropagatorSpec(2, 0.0, 0.5)) <= 1e-4


def test_component_equation_gaussian():
    phi0 = VectorSpectralField.replicate(gaussian(), 2)
    for c in range(2):
        assert component_equation_check(phi0, PropagatorSpec(2, 1.0, 0.4), c) <= 1e-3


def test_component_equation_cubic_single_mode():
    phi0 = VectorSpectralField.replicate(single_mode(2), 3)
    for c in range(3):
        assert component_equation_check(phi0, PropagatorSpec(3, 1.0, 0.3), c) <= 1e-3


def test_wave_solution_matches_exact_modes():
    # n = 2, a = 0: each component is a combination of exp(+ipt) and exp(-ipt).
    m = 3
    phi0 = VectorSpectralField.replicate(single_mode(m), 2)
    p = 2 * math.pi * m / 20.0
    t = 0.7
    out = evolve(phi0, PropagatorSpec(2, 0.0, t)).modes[:, m + 128]
    # tau1 = sigma1, so Phi = cos(pt) phi0 + i sin(pt) sigma1 phi0 = exp(ipt) phi0 for equal components.
    np.testing.assert_allclose(out, np.exp(1j * p * t) * np.ones(2), atol=1e-14)


def test_propagator_spec_validation():
    with pytest.raises(ValueError):
        PropagatorSpec(1, 1.0, 0.1)
    with pytest.raises(ValueError):
        PropagatorSpec(2, 1.0, math.inf)
    with pytest.raises(ValueError):
        PropagatorSpec(2, 1.0, 0.1, "rk4")
