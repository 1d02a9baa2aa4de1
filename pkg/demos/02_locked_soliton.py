# Build the locked soliton (kappa0 = 0 branch), dress it, and integrate the
# scaled-frame model over a decade in sigma.  Shows the lock angle parking
# next to -pi/2 and the amplitude parameter holding at 1/2 while the
# original-frame peak grows like sqrt(tau).
#
# A shorter window than the acceptance run keeps this demo under a minute;
# pass --full for the sigma = 1000 version.
import sys

import numpy as np

from autoresonance.asymptotics import (
    dressed_locked_profile,
    locked_run_forcing,
    quasi_static_lock_angle,
    solve_locked,
)
from autoresonance.models import FrameMap, ModelSpec, SolitonParams
from autoresonance.numerics import make_grid
from autoresonance.solvers import StepperConfig, run_trajectory

sigma_end = 1000.0 if "--full" in sys.argv else 120.0
sigma0 = 10.0

sol = solve_locked(A=0.5, branch_sign=1, alpha=0.0)
print(f"locked branch: eta0 = {sol.eta0}, kappa0 = {sol.kappa0}, A = {sol.A}")
print(f"drive amplitude (quadrature-calibrated A/pi): {sol.drive_amplitude:.6f}")

model = ModelSpec(kind="scaled", forcing=locked_run_forcing(sol, sigma0))
alpha0 = quasi_static_lock_angle(SolitonParams(eta=sol.eta0), sigma0, model)
print(f"matched lock angle at sigma0: {alpha0:.4f} rad (branch angle -pi/2)")

grid = make_grid(1024, 80.0)
field = dressed_locked_profile(sol, sigma0, model, grid)
cfg = StepperConfig(dt=1.5e-3, t_start=sigma0, t_end=sigma_end, record_every=500)
rec = run_trajectory(field, cfg, model)

print(f"\nintegrated sigma {sigma0} -> {sigma_end} ({rec.steps} steps)")
print(f"eta range: [{rec.eta.min():.4f}, {rec.eta.max():.4f}]  (target 1/2)")
print(f"alpha range: [{np.unwrap(rec.alpha).min():+.4f}, {np.unwrap(rec.alpha).max():+.4f}]")

peak_psi = np.array([FrameMap.amplitude_scale(s) for s in rec.times]) * rec.peak_amp
half = len(rec.times) // 2
slope = np.polyfit(np.log(rec.tau[half:]), np.log(peak_psi[half:]), 1)[0]
print(f"original-frame peak growth exponent (late half): {slope:.4f}  (sqrt law: 0.5)")
print(f"effective drive amplitude fell {rec.forcing_amp[0]:.4f} -> {rec.forcing_amp[-1]:.4f}"
      f"  (~ tau^-1/2 decay while the soliton grows)")
