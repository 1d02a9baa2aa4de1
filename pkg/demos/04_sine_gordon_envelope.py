# Drive the sine-Gordon field with a slowly swept carrier, demodulate the
# envelope, and compare against the envelope model integrated in the
# original frame: the reduction error shrinks linearly with eps.
import math

import numpy as np

from autoresonance.models import ForcingSpec, ModelSpec, sine_gordon_scaling
from autoresonance.numerics import ComplexField, make_grid, trig_interpolate
from autoresonance.sg import (
    SGParams,
    compare_with_model,
    demodulate_envelope,
    run_sg,
    sg_initial_state,
)
from autoresonance.solvers import StepperConfig, run_trajectory

k = 0.5
F_amp = 0.15
scaling = sine_gordon_scaling(k, 1.0)
print(f"carrier k = {k}: omega = {scaling.omega:.4f}, "
      f"zeta = {scaling.zeta_scale:.4f} xi1, A = {scaling.amplitude_scale:.4f} Psi")

psi_grid = make_grid(512, 48.0)
psi0 = ComplexField(psi_grid, 0.8 * np.exp(-((psi_grid.points / 2.0) ** 2)) + 0j)
model = ModelSpec(kind="original", forcing=ForcingSpec("constant", F_amp, 0.0, 0.0))

cases = [
    (0.2, 512, 40 * math.pi, 0.02),
    (0.1, 512, 80 * math.pi, 0.05),
    (0.05, 1024, 204 * math.pi, 0.05),
]
for eps, x_n, x_len, dt_x in cases:
    t_star = 0.5 / eps**2
    run = run_trajectory(
        psi0,
        StepperConfig(dt=1e-3, t_start=0.0, t_end=eps**2 * t_star, record_every=10**9),
        model,
    )
    params = SGParams(epsilon=eps, k=k, f=8.0 * scaling.omega**1.5 * F_amp)
    xgrid = make_grid(x_n, x_len)
    zeta0 = scaling.zeta_scale * eps * scaling.omega * xgrid.points
    a0 = trig_interpolate(psi0, zeta0)
    a0[np.abs(zeta0) > 0.5 * psi_grid.length] = 0.0
    state = sg_initial_state(scaling.amplitude_scale * a0, xgrid, params, dt_x)
    period = 2.0 * math.pi / params.omega
    snap_times = np.arange(
        max(3 * dt_x, t_star - 2.6 * period), t_star + 2.6 * period, period / 10
    )
    state, snaps, taken = run_sg(state, t_star + 3 * period, snap_times)
    env = demodulate_envelope(snaps, taken, params, xgrid, t_star=t_star)
    err = compare_with_model(env, run.final_state, scaling, params, t_star)
    print(f"eps = {eps:4.2f}: envelope mismatch at t = 0.5/eps^2: {err:.4f}")
