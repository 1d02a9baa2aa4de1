import math

import numpy as np
import pytest

from autoresonance.asymptotics import (
    NoLockError,
    branch_reference_angle,
    dissipation_balance,
    dissipation_equilibrium_eta,
    dressed_locked_profile,
    h0_closed_form,
    h0_quadrature,
    h1_forcing_closed_form,
    h1_quadrature,
    locked_amplitude,
    locked_run_forcing,
    locked_soliton_init,
    quasi_static_lock_angle,
    predict_parameter_laws,
    solve_locked,
)
from autoresonance.diagnostics import lock_angle
from autoresonance.models import ForcingSpec, ModelSpec, SolitonParams
from autoresonance.numerics import make_grid

FORCED = ModelSpec(kind="scaled", forcing=ForcingSpec("constant", 0.3, 0.0, 0.2))


def test_h0_vanishes_for_exact_unperturbed_soliton():
    # drive off; evaluating the drive+decay residual with both terms zeroed
    p = SolitonParams(eta=0.5, kappa=0.3)
    value = dissipation_balance(0.0, ForcingSpec(), 50.0, p)
    assert abs(value) < 1e-12


def test_h0_unforced_matches_detuning_decay_term():
    p = SolitonParams(eta=0.5, kappa=0.3, Omega=0.4, V=0.7)
    m = ModelSpec(kind="scaled")
    sigma = 50.0
    assert h0_quadrature(p, sigma, m) == pytest.approx(2 * p.eta / sigma, abs=1e-10)


@pytest.mark.parametrize("omega", [0.0, 0.9, 2.0, -1.3])
@pytest.mark.parametrize("nu,kind", [(0.0, "scaled"), (0.2, "scaled_dissipative")])
def test_h0_quadrature_matches_closed_form(omega, nu, kind):
    p = SolitonParams(eta=0.4, kappa=0.3, Omega=omega, V=0.5)
    m = ModelSpec(kind=kind, forcing=ForcingSpec("constant", 0.3, 0.0, 0.2), nu=nu)
    quad = h0_quadrature(p, 50.0, m)
    closed = h0_closed_form(p, 50.0, m)
    assert quad == pytest.approx(closed, abs=1e-12)


def test_h0_oscillatory_magnitude():
    # sweep the lock angle through Omega: the drive part has magnitude
    # 2 pi |Fs| sech(pi kappa / (2 eta)) / sigma^(3/4)
    p0 = SolitonParams(eta=0.4, kappa=0.3)
    m = ModelSpec(kind="scaled", forcing=ForcingSpec("constant", 0.3, 0.0, 0.0))
    sigma = 50.0
    base = h0_quadrature(SolitonParams(eta=0.4, kappa=0.3, Omega=0.0), sigma,
                         ModelSpec(kind="scaled"))
    # alpha = phase + sigma + Omega - kappa V / eta; V = 0 here, so placing
    # Omega at -phase - sigma and the antipode samples the exact extrema
    omega_peak = -m.forcing.phase - sigma
    hi = h0_quadrature(SolitonParams(eta=0.4, kappa=0.3, Omega=omega_peak), sigma, m)
    lo = h0_quadrature(
        SolitonParams(eta=0.4, kappa=0.3, Omega=omega_peak + np.pi), sigma, m
    )
    measured = 0.5 * (hi - lo)
    expected = 2 * np.pi * 0.3 / (np.cosh(0.5 * np.pi * 0.3 / 0.4) * sigma**0.75)
    assert measured == pytest.approx(expected, rel=1e-6)
    assert hi - base == pytest.approx(expected, rel=1e-6)


def test_h1_identity_and_closed_form():
    for om in (0.0, 1.1):
        p = SolitonParams(eta=0.4, kappa=0.3, Omega=om, V=0.5)
        dec = h1_quadrature(p, 50.0, FORCED)
        assert abs(dec.total - dec.kappa_part - dec.tanh_part) < 1e-10
        forcing_only = ModelSpec(
            kind="scaled", forcing=ForcingSpec("constant", 0.3, 0.0, 0.2)
        )
        dec_f = h1_quadrature(p, 50.0, forcing_only)
        # tanh part carries only the drive: the decay term is orthogonal to it
        closed = h1_forcing_closed_form(p, 50.0, forcing_only)
        assert dec_f.tanh_part == pytest.approx(closed, rel=1e-6)


def test_h1_kappa_zero_tanh_part_vanishes():
    p = SolitonParams(eta=0.5, kappa=0.0, Omega=0.4)
    dec = h1_quadrature(p, 50.0, FORCED)
    assert abs(dec.tanh_part) < 1e-10


def test_h1_dissipative_term_is_kappa_multiple_of_h0():
    p = SolitonParams(eta=0.5, kappa=0.3, Omega=0.4, V=0.7)
    m = ModelSpec(kind="scaled")  # decay term only
    dec = h1_quadrature(p, 50.0, m)
    h0 = h0_quadrature(p, 50.0, m)
    assert abs(dec.tanh_part) < 1e-12
    assert dec.total == pytest.approx(2 * p.kappa * h0, abs=1e-12)


def test_solve_locked_kappa_zero_branch():
    sol = solve_locked(0.5)
    assert sol.eta0 == pytest.approx(0.5, abs=1e-14)
    assert sol.kappa0 == 0.0
    assert abs(sol.constraint_residual) < 1e-12
    assert abs(sol.amplitude_residual) < 1e-12


def test_solve_locked_mu_one_branch():
    # mu = 1: eta0 = 1 / (2 sqrt 2), A = cosh(pi/2) / (2 sqrt 2)
    A = math.cosh(math.pi / 2) / (2 * math.sqrt(2))
    sol = solve_locked(A)
    assert sol.mu == pytest.approx(1.0, abs=1e-10)
    assert sol.eta0 == pytest.approx(1 / (2 * math.sqrt(2)), abs=1e-10)
    assert abs(sol.constraint_residual) < 1e-12
    assert abs(sol.amplitude_residual) < 1e-12
    # the mu-parameterized closed form in circulation is sqrt(2) larger
    assert sol.eta0_muform == pytest.approx(math.sqrt(2) * sol.eta0, rel=1e-12)


def test_solve_locked_below_minimum_errors():
    with pytest.raises(NoLockError):
        solve_locked(0.3)


def test_solve_locked_branch_stability():
    A = 0.9
    sol = solve_locked(A)
    sol_eps = solve_locked(A + 1e-9)
    assert abs(sol_eps.eta0 - sol.eta0) < 1e-7
    assert abs(sol_eps.kappa0 - sol.kappa0) < 1e-7


def test_locked_amplitude_curve_minimum():
    mus = np.linspace(0.0, 3.0, 50)
    values = [locked_amplitude(m) for m in mus]
    assert min(values) == pytest.approx(0.5)
    assert np.all(np.diff(values) > 0)


def test_predict_parameter_laws():
    sol = solve_locked(0.5)
    omega_rate, v_rate = predict_parameter_laws(sol)
    assert omega_rate == pytest.approx(1.0, abs=1e-12)
    assert v_rate == 0.0
    A = math.cosh(math.pi / 2) / (2 * math.sqrt(2))
    sol1 = solve_locked(A)
    omega_rate1, v_rate1 = predict_parameter_laws(sol1)
    assert omega_rate1 == pytest.approx(1.0, abs=1e-10)
    assert v_rate1 == pytest.approx(1.0, abs=1e-10)


def test_dissipation_balance_root_scaling():
    # with constant |Fs| the equilibrium amplitude decays as sigma^(-1/4)
    forcing = ForcingSpec("constant", 0.03, 0.0, 0.0)
    eta_1 = dissipation_equilibrium_eta(0.1, forcing, 400.0)
    eta_16 = dissipation_equilibrium_eta(0.1, forcing, 6400.0)
    assert eta_16 / eta_1 == pytest.approx(0.5, abs=1e-3)


def test_dissipation_balance_compensated_drive():
    # |Fs| growing as sigma^(1/4) pins the equilibrium amplitude
    forcing = ForcingSpec("power", 0.0095, 0.25, 0.0)
    values = [
        dissipation_equilibrium_eta(0.1, forcing, s) for s in (200.0, 800.0, 3200.0)
    ]
    assert max(values) - min(values) < 1e-6


def test_dissipation_balance_sign_structure():
    # damping drains, in-phase drive pumps; the residual changes sign across
    # the equilibrium amplitude
    forcing = ForcingSpec("constant", 0.03, 0.0, 0.0)
    sigma = 400.0
    root = dissipation_equilibrium_eta(0.1, forcing, sigma)
    omega0 = -sigma  # alpha = 0
    below = dissipation_balance(
        0.1, forcing, sigma, SolitonParams(eta=0.5 * root, Omega=omega0)
    )
    above = dissipation_balance(
        0.1, forcing, sigma, SolitonParams(eta=2.0 * root, Omega=omega0)
    )
    assert below > 0 > above


def test_quasi_static_lock_angle_balances_mass_flux():
    sol = solve_locked(0.5)
    sigma0 = 10.0
    m = ModelSpec(kind="scaled", forcing=locked_run_forcing(sol, sigma0))
    p = SolitonParams(eta=sol.eta0, kappa=sol.kappa0)
    alpha = quasi_static_lock_angle(p, sigma0, m)
    # analytic root: cos(alpha) = eta / (pi |Fs| sigma^(1/4)), stable side
    amp = m.forcing.coefficient
    expected = -math.acos(sol.eta0 / (math.pi * amp * sigma0**0.25))
    assert alpha == pytest.approx(expected, abs=1e-6)


def test_quasi_static_lock_angle_requires_enough_drive():
    p = SolitonParams(eta=0.5)
    weak = ModelSpec(kind="scaled", forcing=ForcingSpec("constant", 1e-4, 0.0, 0.0))
    with pytest.raises(NoLockError):
        quasi_static_lock_angle(p, 10.0, weak)


def test_locked_soliton_init_matches_angle():
    sol = solve_locked(0.5)
    sigma0 = 10.0
    m = ModelSpec(kind="scaled", forcing=locked_run_forcing(sol, sigma0))
    p0 = locked_soliton_init(sol, sigma0, m)
    alpha = lock_angle(p0, sigma0, m.forcing)
    expected = quasi_static_lock_angle(p0, sigma0, m)
    assert alpha == pytest.approx(expected, abs=1e-9)


def test_branch_reference_angles():
    assert branch_reference_angle(solve_locked(0.5, 1, 0.0)) == pytest.approx(-math.pi / 2)
    assert branch_reference_angle(solve_locked(0.5, 1, math.pi)) == pytest.approx(math.pi / 2)


def test_drive_amplitude_is_pi_scaled():
    sol = solve_locked(0.5)
    assert sol.drive_amplitude == pytest.approx(0.5 / math.pi, rel=1e-12)


def test_dressed_locked_profile_is_stationary():
    sol = solve_locked(0.5)
    sigma0 = 10.0
    m = ModelSpec(kind="scaled", forcing=locked_run_forcing(sol, sigma0))
    grid = make_grid(1024, 80.0)
    field = dressed_locked_profile(sol, sigma0, m, grid)
    # verify the defining stationary equation directly
    chi = field.values * np.exp(-1j * sigma0)
    k2 = grid.wavenumbers**2
    lap = np.fft.ifft(-k2 * np.fft.fft(chi))
    drive = m.forcing.value(sigma0) / sigma0**0.75
    res = lap - chi + 2 * np.abs(chi) ** 2 * chi + drive + 1j * chi / (4 * sigma0)
    assert np.max(np.abs(res)) < 1e-10
    # dressed peak sits near the bare soliton peak 2 eta0 = 1
    peak = np.max(np.abs(chi))
    assert 0.95 < peak < 1.15


def test_h0_at_branch_angle_decays_as_inverse_sigma():
    sol = solve_locked(0.5)
    alpha_ref = branch_reference_angle(sol)
    values = []
    sigmas = (100.0, 1000.0, 10000.0)
    for s in sigmas:
        forcing = ForcingSpec("power", sol.drive_amplitude, 0.25, 0.0)
        m = ModelSpec(kind="scaled", forcing=forcing)
        p = SolitonParams(eta=sol.eta0, kappa=sol.kappa0, Omega=alpha_ref - s)
        values.append(abs(h0_quadrature(p, s, m)))
    slope = np.polyfit(np.log(sigmas), np.log(values), 1)[0]
    assert slope <= -0.99
    assert values[0] == pytest.approx(2 * sol.eta0 / 100.0, rel=1e-9)
