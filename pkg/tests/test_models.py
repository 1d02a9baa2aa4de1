import numpy as np
import pytest

from autoresonance.diagnostics import mass, momentum
from autoresonance.models import (
    ForcingSpec,
    FrameMap,
    ModelSpec,
    SolitonParams,
    h_field,
    map_field_original_to_scaled,
    map_field_scaled_to_original,
    map_sigma_to_tau,
    map_tau_to_sigma,
    original_forcing_from_scaled,
    residual_original,
    residual_scaled,
    scaled_forcing_from_original,
    sine_gordon_scaling,
    soliton_field,
    soliton_sigma_derivative,
)
from autoresonance.numerics import ComplexField, make_grid

GRID = make_grid(2048, 120.0)


def test_soliton_peak_magnitude():
    f = soliton_field(SolitonParams(eta=0.5), GRID)
    assert np.max(np.abs(f.values)) == pytest.approx(1.0, abs=1e-6)


def test_soliton_mass_is_four_eta():
    f = soliton_field(SolitonParams(eta=0.5, kappa=0.3), GRID)
    assert mass(f) == pytest.approx(2.0, abs=1e-10)


def test_soliton_momentum_is_minus_8i_kappa_eta():
    f = soliton_field(SolitonParams(eta=0.5, kappa=0.3), GRID)
    p = momentum(f)
    assert abs(p - (-1.2j)) < 1e-9


@pytest.mark.parametrize("eta", [0.25, 0.5, 1.0])
@pytest.mark.parametrize("kappa", [-0.5, 0.0, 0.3])
def test_soliton_mass_momentum_family(eta, kappa):
    f = soliton_field(SolitonParams(eta=eta, kappa=kappa, Omega=0.3, V=0.4), GRID)
    assert mass(f, tail_check=False) == pytest.approx(4 * eta, abs=1e-9)
    assert abs(momentum(f, tail_check=False) - (-8j * kappa * eta)) < 1e-8


def test_soliton_params_validation():
    with pytest.raises(ValueError):
        SolitonParams(eta=0.0)
    with pytest.raises(ValueError):
        SolitonParams(eta=0.5, kappa=np.nan)


def test_residual_original_zero_solution():
    g = make_grid(64, 10.0)
    zero = ComplexField(g, np.zeros(64, dtype=complex))
    m = ModelSpec(kind="original")
    r = residual_original(zero, zero, 2.0, m)
    assert np.max(np.abs(r.values)) == 0.0


def test_residual_original_uniform_special_solution():
    # Psi = sqrt(tau) e^{ia} with F = i e^{ia} / (2 sqrt(tau))
    g = make_grid(64, 10.0)
    a, tau = 0.7, 5.0
    psi = ComplexField(g, np.full(64, np.sqrt(tau) * np.exp(1j * a)))
    dpsi = ComplexField(g, np.full(64, np.exp(1j * a) / (2 * np.sqrt(tau))))
    m = ModelSpec(
        kind="original",
        forcing=ForcingSpec("power", 0.5, -0.5, a + np.pi / 2),
    )
    r = residual_original(psi, dpsi, tau, m)
    assert np.max(np.abs(r.values)) < 1e-12


def test_residual_original_detuning_offset():
    # replacing tau by tau + dtau shifts the residual by dtau * Psi pointwise
    g = make_grid(256, 60.0)
    m = ModelSpec(kind="original")
    p = SolitonParams(eta=0.5)
    psi = soliton_field(p, g, tail_check=False)
    dpsi = ComplexField(g, np.zeros(g.n, dtype=complex))
    tau = 2.0
    dtau = 0.37
    r1 = residual_original(psi, dpsi, tau, m)
    r2 = residual_original(psi, dpsi, tau + dtau, m)
    diff = r1.values - r2.values
    assert np.max(np.abs(diff - dtau * psi.values)) < 1e-12
    assert np.max(np.abs(diff)) == pytest.approx(dtau * np.max(np.abs(psi.values)), rel=1e-12)


@pytest.mark.parametrize(
    "eta,kappa", [(0.5, 0.0), (0.5, 0.3), (0.25, -0.5), (1.0, 0.2)]
)
def test_soliton_solves_unperturbed_equation(eta, kappa):
    # wide domain: the eta = 0.25 soliton needs tails < 1e-15 before the
    # spectral second derivative amplifies the periodic wrap by k_max^2
    grid = make_grid(4096, 160.0)
    p = SolitonParams(eta=eta, kappa=kappa, Omega=0.4, V=0.7)
    phi = soliton_field(p, grid, tail_check=False)
    dphi = soliton_sigma_derivative(p, grid)
    r = residual_scaled(phi, dphi, 10.0, ModelSpec(kind="unperturbed_nls"))
    assert np.max(np.abs(r.values)) < 1e-11


def test_residual_scaled_zero_solution():
    g = make_grid(64, 10.0)
    zero = ComplexField(g, np.zeros(64, dtype=complex))
    r = residual_scaled(zero, zero, 10.0, ModelSpec(kind="scaled"))
    assert np.max(np.abs(r.values)) == 0.0


def test_h_field_reduces_to_perturbation_terms():
    p = SolitonParams(eta=0.5, kappa=0.3, Omega=0.4, V=0.7)
    m = ModelSpec(kind="scaled", forcing=ForcingSpec("constant", 0.3, 0.0, 0.2))
    full = h_field(p, 100.0, m, GRID, form="full")
    reduced = h_field(p, 100.0, m, GRID, form="reduced")
    assert np.max(np.abs(full.values - reduced.values)) < 1e-10


def test_h_field_unforced_is_detuning_decay_term():
    p = SolitonParams(eta=0.5, kappa=0.0)
    m = ModelSpec(kind="scaled")
    sigma = 50.0
    h = h_field(p, sigma, m, GRID, form="reduced")
    phi0 = soliton_field(p, GRID, tail_check=False)
    expected = -1j * phi0.values / (4 * sigma)
    assert np.max(np.abs(h.values - expected)) < 1e-14


def test_h_field_generic_cancellation():
    p = SolitonParams(eta=0.5, kappa=0.0)
    m = ModelSpec(kind="scaled", forcing=ForcingSpec("constant", 0.3, 0.0, 0.0))
    full = h_field(p, 100.0, m, GRID, form="full")
    reduced = h_field(p, 100.0, m, GRID, form="reduced")
    assert np.max(np.abs(full.values - reduced.values)) < 1e-10


def test_tau_sigma_maps():
    assert map_tau_to_sigma(2.0) == pytest.approx(2.0)
    assert map_sigma_to_tau(2.0) == pytest.approx(2.0)
    assert map_tau_to_sigma(10.0) == pytest.approx(50.0)
    assert map_sigma_to_tau(map_tau_to_sigma(3.7)) == pytest.approx(3.7, rel=1e-15)
    with pytest.raises(ValueError):
        map_tau_to_sigma(0.0)
    with pytest.raises(ValueError):
        map_sigma_to_tau(-1.0)


def test_amplitude_scale_identity():
    sigma = 7.3
    s = FrameMap.amplitude_scale(sigma)
    assert s * s == pytest.approx(2 * np.sqrt(2 * sigma), rel=1e-14)


def test_frame_map_peak_scaling():
    # sigma = 1/2 gives s = sqrt(2)
    g = make_grid(512, 60.0)
    phi = soliton_field(SolitonParams(eta=0.5), g, tail_check=False)
    psi, tau, _ = map_field_scaled_to_original(phi, 0.5)
    assert np.max(np.abs(psi.values)) == pytest.approx(
        np.sqrt(2.0) * np.max(np.abs(phi.values)), rel=1e-12
    )
    # general sigma: |Psi|max = 2 eta sqrt(2) sqrt(tau)
    sigma = 12.5
    psi2, tau2, _ = map_field_scaled_to_original(phi, sigma)
    assert np.max(np.abs(psi2.values)) == pytest.approx(
        2 * 0.5 * np.sqrt(2.0) * np.sqrt(tau2), rel=1e-4
    )


def test_frame_map_round_trip():
    g = make_grid(512, 60.0)
    phi = soliton_field(SolitonParams(eta=0.5, kappa=0.2, Omega=0.3, V=0.1), g,
                        tail_check=False)
    psi, tau, _ = map_field_scaled_to_original(phi, 12.5)
    back, sigma, _ = map_field_original_to_scaled(psi, tau)
    assert np.max(np.abs(back.values - phi.values)) < 1e-12
    assert sigma == pytest.approx(12.5, rel=1e-15)


def test_frame_map_mass_transform():
    g = make_grid(512, 60.0)
    phi = soliton_field(SolitonParams(eta=0.5, kappa=0.2), g, tail_check=False)
    sigma = 12.5
    psi, tau, zeta_grid = map_field_scaled_to_original(phi, sigma)
    s2 = FrameMap.amplitude_scale(sigma) ** 2
    lhs = mass(psi, tail_check=False)
    rhs = s2 * (2 * sigma) ** (-0.25) * mass(phi, tail_check=False)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_frame_map_recovers_uniform_special_solution():
    # the scaled-frame image of sqrt(tau) e^{ia} is e^{i(sigma - a)} / sqrt(2)
    g = make_grid(64, 10.0)
    a, sigma = 0.7, 12.5
    phi = ComplexField(g, np.full(64, np.exp(1j * (sigma - a)) / np.sqrt(2.0)))
    psi, tau, _ = map_field_scaled_to_original(phi, sigma)
    assert np.allclose(psi.values, np.sqrt(tau) * np.exp(1j * a), atol=1e-12)


def test_forcing_frame_relation_round_trip():
    f = 0.37 * np.exp(0.9j)
    fs = scaled_forcing_from_original(f)
    assert fs == pytest.approx(np.conj(f) / (2 * 2**0.25))
    assert original_forcing_from_scaled(fs) == pytest.approx(f)


def test_sine_gordon_scaling_values():
    s0 = sine_gordon_scaling(0.0, 1.0)
    assert s0.omega == pytest.approx(1.0)
    assert s0.F_equivalent == pytest.approx(1.0 / 8.0)
    assert s0.zeta_scale == pytest.approx(np.sqrt(2.0))
    assert s0.amplitude_scale == pytest.approx(2.0)
    s3 = sine_gordon_scaling(np.sqrt(3.0), 1.0)
    assert s3.omega == pytest.approx(2.0)
    assert s3.F_equivalent == pytest.approx(1.0 / (8.0 * np.sqrt(8.0)))


def test_forcing_spec_laws_and_validation():
    f = ForcingSpec("power", 0.5, -0.5, 0.1)
    assert f.amplitude(4.0) == pytest.approx(0.25)
    assert f.value(4.0) == pytest.approx(0.25 * np.exp(0.1j))
    assert ForcingSpec("constant", 0.3).amplitude(99.0) == 0.3
    with pytest.raises(ValueError):
        ForcingSpec("quadratic", 1.0)
    with pytest.raises(ValueError):
        ForcingSpec("constant", -1.0)


def test_model_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec(kind="bogus")
    with pytest.raises(ValueError):
        ModelSpec(kind="scaled", nu=-0.1)
    with pytest.raises(ValueError):
        ModelSpec(kind="original", exact_frame=True)
