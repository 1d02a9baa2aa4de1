"""Scenario runner: TOML configs in, CSV time series and JSON summaries out.

A scenario bundles a model, numerical settings, an initial state, and a list
of analyses; running one writes ``<out>/<name>/trajectory.csv`` (fixed
column schema) and ``<out>/<name>/summary.json`` (resolved configuration,
analysis results, solver statistics).  Scan-type scenarios additionally
write ``scan.csv``.  Outputs are byte-identical across repeat runs of the
same build.

Exit codes: 0 success, 2 configuration error, 3 numerical abort (the abort
time is recorded in the summary).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import asymptotics, diagnostics, sg
from .models import (
    ForcingSpec,
    FrameMap,
    ModelSpec,
    SolitonParams,
    sine_gordon_scaling,
    soliton_field,
)
from .numerics import ComplexField, make_grid, trig_interpolate
from .solvers import BlowUpError, StepperConfig, TrajectoryRecord, run_trajectory


class ConfigError(ValueError):
    """Scenario configuration is invalid; message carries the key path."""


# ---------------------------------------------------------------------------
# schema validation
# ---------------------------------------------------------------------------

_SCENARIO_KINDS = ("pde", "ode", "balance_scan", "h0_scan", "dual_frame", "sg_compare")

_SCHEMA = {
    "scenario": {"name": str, "kind": str},
    "model": {
        "kind": str,
        "nu": float,
        "nonlinearity_coefficient": float,
        "exact_frame": bool,
    },
    "forcing": {"law": str, "coefficient": float, "exponent": float, "phase": float},
    "grid": {"n": int, "length": float},
    "stepper": {
        "dt": float,
        "t_start": float,
        "t_end": float,
        "record_every": int,
        "integrator": str,
    },
    "init": {
        "type": str,
        "A": float,
        "branch_sign": int,
        "alpha_branch": float,
        "dressed": bool,
        "eta": float,
        "kappa": float,
        "Omega": float,
        "V": float,
        "a": float,
        "perturbation": float,
        "path": str,
    },
    "scan": {"t_min": float, "t_max": float, "points": int, "values": list, "mu": float,
             "alpha": float},
    "dual_frame": {
        "tau_start": float,
        "tau_end": float,
        "dt_scaled": float,
        "dt_original": float,
    },
    "sg": {
        "epsilons": list,
        "k": float,
        "F_amplitude": float,
        "psi_n": int,
        "psi_length": float,
        "x_n": list,
        "x_length": list,
        "dt": list,
        "envelope_amplitude": float,
        "envelope_width": float,
    },
    "analysis": {
        "kind": str,
        "name": str,
        "target": str,
        "frame": str,
        "x_axis": str,
        "window": list,
        "band": float,
        "center": float,
        "tolerance": float,
        "reference": str,
        "dt_coarse": float,
        "t_span": float,
        "bounds": list,
        "source": str,
    },
}

_REQUIRED = {"scenario": ("name", "kind")}


def _check_section(section: str, table: dict, errors: list) -> None:
    schema = _SCHEMA.get(section)
    if schema is None:
        errors.append(f"[{section}]: unknown section")
        return
    for key, value in table.items():
        if key not in schema:
            errors.append(f"[{section}].{key}: unknown key")
            continue
        expected = schema[key]
        if expected is float:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append(f"[{section}].{key}: expected a number, got {value!r}")
        elif expected is int:
            if not isinstance(value, int) or isinstance(value, bool):
                errors.append(f"[{section}].{key}: expected an integer, got {value!r}")
        elif not isinstance(value, expected):
            errors.append(
                f"[{section}].{key}: expected {expected.__name__}, got {value!r}"
            )


def validate_config(cfg: dict) -> list:
    """Return a list of error strings; empty means the config parses cleanly."""
    errors = []
    if not isinstance(cfg, dict):
        return ["top level: expected a table"]
    for section, table in cfg.items():
        if section == "analysis":
            if not isinstance(table, list):
                errors.append("[analysis]: expected an array of tables")
                continue
            for i, entry in enumerate(table):
                if not isinstance(entry, dict):
                    errors.append(f"[[analysis]] #{i}: expected a table")
                    continue
                _check_section("analysis", entry, errors)
            continue
        if not isinstance(table, dict):
            errors.append(f"[{section}]: expected a table")
            continue
        _check_section(section, table, errors)
    for section, keys in _REQUIRED.items():
        table = cfg.get(section, {})
        for key in keys:
            if key not in table:
                errors.append(f"[{section}].{key}: required key missing")
    kind = cfg.get("scenario", {}).get("kind")
    if kind is not None and kind not in _SCENARIO_KINDS:
        errors.append(f"[scenario].kind: unknown kind {kind!r}")
    return errors


def load_config(path) -> dict:
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def apply_overrides(cfg: dict, overrides) -> dict:
    """Apply ``section.key=value`` overrides (TOML-typed) after file parse."""
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key_path, raw = item.split("=", 1)
        parts = key_path.strip().split(".")
        if len(parts) != 2:
            raise ConfigError(f"override key {key_path!r} must be section.key")
        try:
            value = tomllib.loads(f"v = {raw.strip()}")["v"]
        except tomllib.TOMLDecodeError as err:
            raise ConfigError(f"override value {raw!r}: {err}") from err
        section, key = parts
        cfg.setdefault(section, {})[key] = value
    return cfg


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------

def _resolve_forcing(cfg: dict, locked=None, t_start: float | None = None) -> ForcingSpec:
    table = dict(cfg.get("forcing", {}))
    law = table.get("law", "constant")
    if law == "locked":
        if locked is None or t_start is None:
            raise ConfigError("[forcing].law = 'locked' needs a locked_soliton init")
        return asymptotics.locked_run_forcing(
            locked, t_start, phase=table.get("phase", 0.0)
        )
    try:
        return ForcingSpec(
            law=law,
            coefficient=table.get("coefficient", 0.0),
            exponent=table.get("exponent", 0.0),
            phase=table.get("phase", 0.0),
        )
    except ValueError as err:
        raise ConfigError(f"[forcing]: {err}") from err


def _resolve_locked(init: dict):
    alpha = init.get("alpha_branch", 0.0)
    if abs(alpha - math.pi) < 1e-9:
        alpha = math.pi
    try:
        return asymptotics.solve_locked(
            A=init.get("A", 0.5),
            branch_sign=init.get("branch_sign", 1),
            alpha=alpha,
        )
    except (ValueError, asymptotics.NoLockError) as err:
        raise ConfigError(f"[init]: {err}") from err


def _resolve_model(cfg: dict, locked=None, t_start=None) -> ModelSpec:
    table = cfg.get("model", {})
    try:
        return ModelSpec(
            kind=table.get("kind", "scaled"),
            forcing=_resolve_forcing(cfg, locked, t_start),
            nu=table.get("nu", 0.0),
            nonlinearity_coefficient=table.get("nonlinearity_coefficient", 2.0),
            exact_frame=table.get("exact_frame", False),
        )
    except ValueError as err:
        raise ConfigError(f"[model]: {err}") from err


def _resolve_stepper(cfg: dict) -> StepperConfig:
    table = cfg.get("stepper", {})
    try:
        return StepperConfig(
            dt=table["dt"],
            t_start=table["t_start"],
            t_end=table["t_end"],
            record_every=table.get("record_every", 100),
            integrator=table.get("integrator", "strang"),
        )
    except KeyError as err:
        raise ConfigError(f"[stepper].{err.args[0]}: required key missing") from err
    except ValueError as err:
        raise ConfigError(f"[stepper]: {err}") from err


def _resolve_grid(cfg: dict):
    table = cfg.get("grid", {})
    try:
        return make_grid(table.get("n", 1024), table.get("length", 80.0))
    except ValueError as err:
        raise ConfigError(f"[grid]: {err}") from err


def _resolve_pde_init(cfg: dict, grid, model, stepper, locked):
    init = cfg.get("init", {})
    itype = init.get("type", "soliton")
    if itype == "locked_soliton":
        if locked is None:
            raise ConfigError("[init]: locked_soliton init failed to resolve")
        if init.get("dressed", True):
            return asymptotics.dressed_locked_profile(
                locked, stepper.t_start, model, grid
            )
        params = asymptotics.locked_soliton_init(locked, stepper.t_start, model)
        return soliton_field(params, grid, tail_check=False)
    if itype == "soliton":
        try:
            params = SolitonParams(
                eta=init.get("eta", 0.5),
                kappa=init.get("kappa", 0.0),
                Omega=init.get("Omega", 0.0),
                V=init.get("V", 0.0),
            )
        except ValueError as err:
            raise ConfigError(f"[init]: {err}") from err
        return soliton_field(params, grid, tail_check=False)
    if itype == "zero":
        return ComplexField(grid, np.zeros(grid.n, dtype=np.complex128))
    if itype == "file":
        path = init.get("path")
        if not path:
            raise ConfigError("[init].path: required for type = 'file'")
        try:
            data = np.load(path)["values"]
        except Exception as err:
            raise ConfigError(f"[init].path: cannot load {path!r}: {err}") from err
        return ComplexField(grid, data)
    raise ConfigError(f"[init].type: unknown type {itype!r}")


# ---------------------------------------------------------------------------
# analyses
# ---------------------------------------------------------------------------

def _column_for_fit(record: TrajectoryRecord, target: str, frame: str) -> np.ndarray:
    if target == "peak_psi":
        if frame != "original":
            raise ConfigError("[analysis]: peak_psi is an original-frame target")
        scales = np.array([FrameMap.amplitude_scale(s) for s in record.times])
        return scales * record.peak_amp
    if target in TrajectoryRecord.COLUMNS:
        return np.asarray(record.column(target), dtype=float)
    raise ConfigError(f"[analysis].target: unknown column {target!r}")


def _run_fit(entry: dict, record: TrajectoryRecord, scan_table=None) -> dict:
    target = entry.get("target", "eta")
    frame = entry.get("frame", "native")
    if entry.get("source") == "scan":
        if scan_table is None or target not in scan_table:
            raise ConfigError(f"[analysis].target: {target!r} not in scan output")
        values = np.asarray(scan_table[target], dtype=float)
        times = np.asarray(scan_table["time"], dtype=float)
    else:
        values = _column_for_fit(record, target, frame)
        axis = entry.get("x_axis", "time" if frame != "original" else "tau")
        times = np.asarray(record.column(axis), dtype=float)
    window = entry.get("window")
    fit = diagnostics.fit_power_law(times, values, None if window is None else tuple(window))
    return {
        "target": target,
        "frame": frame,
        "exponent": fit.exponent,
        "prefactor": fit.prefactor,
        "r_squared": fit.r_squared,
        "window": list(fit.window),
    }


def _run_lock_check(entry: dict, record: TrajectoryRecord, context: dict) -> dict:
    band = entry.get("band", 0.5)
    reference = context.get("alpha_reference")
    check = diagnostics.detect_lock(record.alpha, reference=reference, std_threshold=band)
    deviations = np.abs(
        diagnostics.wrap_angle(record.alpha - (check.reference))
    )
    max_dev = float(np.max(deviations))
    return {
        "locked": bool(check.locked and max_dev <= band),
        "mean": check.mean,
        "std": check.std,
        "reference": check.reference,
        "band": band,
        "max_deviation": max_dev,
    }


def _run_eta_band(entry: dict, record: TrajectoryRecord) -> dict:
    center = entry.get("center", 0.5)
    tol = entry.get("tolerance", 0.1)
    lo = float(np.min(record.eta))
    hi = float(np.max(record.eta))
    within = lo >= center * (1.0 - tol) and hi <= center * (1.0 + tol)
    return {"center": center, "tolerance": tol, "min": lo, "max": hi, "within": bool(within)}


def _run_mass_drift(record: TrajectoryRecord) -> dict:
    m0 = record.mass[0]
    drift = float(np.max(np.abs(record.mass - m0)) / abs(m0)) if m0 else 0.0
    return {"max_relative_drift": drift}


def _run_order_check(entry: dict, cfg: dict, model: ModelSpec, grid) -> dict:
    init = cfg.get("init", {})
    params = SolitonParams(
        eta=init.get("eta", 0.5), kappa=init.get("kappa", 0.1),
        Omega=init.get("Omega", 0.0), V=init.get("V", 0.0),
    )
    dt = entry.get("dt_coarse", 4e-3)
    span = entry.get("t_span", 1.0)
    t0 = cfg["stepper"]["t_start"]

    def error_at(step_size: float) -> float:
        run = run_trajectory(
            soliton_field(params, grid, tail_check=False),
            StepperConfig(dt=step_size, t_start=t0, t_end=t0 + span, record_every=10**9),
            model,
        )
        omega_rate = 4.0 * (params.kappa**2 - params.eta**2)
        exact = SolitonParams(
            eta=params.eta, kappa=params.kappa,
            Omega=params.Omega + omega_rate * span,
            V=params.V + 8.0 * params.kappa * params.eta * span,
        )
        ref = soliton_field(exact, grid, tail_check=False)
        return float(
            np.linalg.norm(run.final_state.values - ref.values)
            / np.linalg.norm(ref.values)
        )

    e_coarse = error_at(dt)
    e_fine = error_at(0.5 * dt)
    return {
        "dt_coarse": dt,
        "error_coarse": e_coarse,
        "error_fine": e_fine,
        "ratio": e_coarse / e_fine if e_fine else float("inf"),
    }


def _run_ode_track(entry: dict, record: TrajectoryRecord, context: dict) -> dict:
    # peak_amp = |psi| and alpha = arg(psi) - a for the special drive phase,
    # so |psi - sqrt(tau) e^{ia}| = | |psi| e^{i alpha} - sqrt(tau) |
    a = context.get("ode_phase", 0.0)
    errors = np.abs(
        record.peak_amp * np.exp(1j * record.alpha) - np.sqrt(record.times)
    )
    return {"max_error": float(np.max(errors)), "a": a}


def _run_amplitude_ratio_band(entry: dict, record: TrajectoryRecord) -> dict:
    bounds = entry.get("bounds", [0.8, 1.2])
    ratio = record.peak_amp / np.sqrt(record.times)
    return {
        "min": float(np.min(ratio)),
        "max": float(np.max(ratio)),
        "bounds": list(bounds),
        "within": bool(np.min(ratio) >= bounds[0] and np.max(ratio) <= bounds[1]),
    }


# ---------------------------------------------------------------------------
# scenario execution
# ---------------------------------------------------------------------------

def _ansatz_record_rows(sigmas, etas, mus, alpha, forcing: ForcingSpec):
    rows = {name: [] for name in (
        "times", "tau", "mass", "momentum", "peak_amp", "eta", "kappa", "Omega",
        "V", "alpha", "forcing_amp", "extraction_residual",
    )}
    for s, eta, mu in zip(sigmas, etas, mus):
        kappa = mu * eta
        rows["times"].append(s)
        rows["tau"].append(math.sqrt(2.0 * s))
        rows["mass"].append(4.0 * eta)
        rows["momentum"].append(-8j * kappa * eta)
        rows["peak_amp"].append(2.0 * eta)
        rows["eta"].append(eta)
        rows["kappa"].append(kappa)
        rows["Omega"].append(0.0)
        rows["V"].append(0.0)
        rows["alpha"].append(alpha)
        rows["forcing_amp"].append(forcing.amplitude(s) / s**0.25)
        rows["extraction_residual"].append(0.0)
    arrays = {
        name: np.asarray(vals, dtype=complex if name == "momentum" else float)
        for name, vals in rows.items()
    }
    return TrajectoryRecord(aborted=False, abort_time=None, steps=0, final_state=None, **arrays)


def _execute_pde(cfg: dict, context: dict):
    init_table = cfg.get("init", {})
    locked = None
    stepper = _resolve_stepper(cfg)
    if init_table.get("type") == "locked_soliton":
        locked = _resolve_locked(init_table)
        context["locked_solution"] = locked
    model = _resolve_model(cfg, locked, stepper.t_start)
    grid = _resolve_grid(cfg)
    field = _resolve_pde_init(cfg, grid, model, stepper, locked)
    if locked is not None:
        p_trial = SolitonParams(eta=locked.eta0, kappa=locked.kappa0)
        context["alpha_reference"] = asymptotics.quasi_static_lock_angle(
            p_trial, stepper.t_start, model
        )
    context["model"] = model
    context["grid"] = grid
    record = run_trajectory(field, stepper, model)
    return record, None


def _execute_ode(cfg: dict, context: dict):
    stepper = _resolve_stepper(cfg)
    init = cfg.get("init", {})
    a = init.get("a", 0.0)
    model = _resolve_model(cfg)
    if model.kind != "ode_primary_resonance":
        raise ConfigError("[model].kind: ode scenario needs kind = 'ode_primary_resonance'")
    if init.get("type", "ode_special") != "ode_special":
        raise ConfigError("[init].type: ode scenario supports type = 'ode_special'")
    psi0 = math.sqrt(stepper.t_start) * np.exp(1j * a) + init.get("perturbation", 0.0)
    context["ode_phase"] = a
    context["model"] = model
    record = run_trajectory(complex(psi0), stepper, model)
    return record, None


def _execute_balance_scan(cfg: dict, context: dict):
    scan = cfg.get("scan", {})
    model = _resolve_model(cfg)
    if model.kind != "scaled_dissipative" or model.nu <= 0.0:
        raise ConfigError("[model]: balance scan needs scaled_dissipative with nu > 0")
    t_min = scan.get("t_min", 100.0)
    t_max = scan.get("t_max", 10000.0)
    points = scan.get("points", 25)
    mu = scan.get("mu", 0.0)
    alpha = scan.get("alpha", 0.0)
    sigmas = np.geomspace(t_min, t_max, points)
    etas = [
        asymptotics.dissipation_equilibrium_eta(
            model.nu, model.forcing, s, mu=mu, alpha=alpha
        )
        for s in sigmas
    ]
    record = _ansatz_record_rows(sigmas, etas, [mu] * len(etas), alpha, model.forcing)
    context["model"] = model
    return record, None


def _execute_h0_scan(cfg: dict, context: dict):
    scan = cfg.get("scan", {})
    init = cfg.get("init", {})
    locked = _resolve_locked(init)
    context["locked_solution"] = locked
    sigmas = [float(s) for s in scan.get("values", [1e2, 1e3, 1e4])]
    alpha_ref = asymptotics.branch_reference_angle(locked)
    phase = cfg.get("forcing", {}).get("phase", 0.0)
    h0_values = []
    for s in sigmas:
        forcing = ForcingSpec(
            law="power",
            coefficient=locked.drive_amplitude,
            exponent=0.25,
            phase=phase,
        )
        model = ModelSpec(kind="scaled", forcing=forcing)
        omega0 = alpha_ref - phase - s
        p = SolitonParams(eta=locked.eta0, kappa=locked.kappa0, Omega=omega0, V=0.0)
        h0_values.append(abs(asymptotics.h0_quadrature(p, s, model)))
    forcing = ForcingSpec(
        law="power", coefficient=locked.drive_amplitude, exponent=0.25, phase=phase
    )
    record = _ansatz_record_rows(
        sigmas, [locked.eta0] * len(sigmas), [locked.mu] * len(sigmas), alpha_ref, forcing
    )
    scan_table = {"time": sigmas, "h0_abs": h0_values}
    context["model"] = ModelSpec(kind="scaled", forcing=forcing)
    return record, scan_table


def _execute_dual_frame(cfg: dict, context: dict):
    from .models import (
        map_field_original_to_scaled,
        map_field_scaled_to_original,
        original_forcing_from_scaled,
    )

    table = cfg.get("dual_frame", {})
    tau0 = table.get("tau_start", 5.0)
    tau1 = table.get("tau_end", 6.0)
    sigma0 = FrameMap.tau_to_sigma(tau0)
    sigma1 = FrameMap.tau_to_sigma(tau1)
    grid = _resolve_grid(cfg)
    init = cfg.get("init", {})
    params = SolitonParams(
        eta=init.get("eta", 0.5), kappa=init.get("kappa", 0.0),
        Omega=init.get("Omega", 0.4), V=init.get("V", 0.0),
    )
    forcing = _resolve_forcing(cfg)
    model_scaled = ModelSpec(kind="scaled", forcing=forcing, exact_frame=True)
    phi0 = soliton_field(params, grid, tail_check=False)
    dt_scaled = table.get("dt_scaled", 4e-4)
    record = run_trajectory(
        phi0,
        StepperConfig(
            dt=dt_scaled, t_start=sigma0, t_end=sigma1,
            record_every=max(1, int(round((sigma1 - sigma0) / dt_scaled / 64))),
            integrator="rk4",
        ),
        model_scaled,
    )
    # original-frame twin from mapped initial data
    psi0, _, zeta_grid = map_field_scaled_to_original(phi0, sigma0)
    f_original = original_forcing_from_scaled(forcing.value(sigma0))
    model_orig = ModelSpec(
        kind="original",
        forcing=ForcingSpec(
            law="constant", coefficient=abs(f_original), exponent=0.0,
            phase=float(np.angle(f_original)),
        ),
    )
    dt_orig = table.get("dt_original", 2.5e-4)
    run_orig = run_trajectory(
        psi0,
        StepperConfig(dt=dt_orig, t_start=tau0, t_end=tau1, record_every=10**9),
        model_orig,
    )
    phi_from_psi, _, _ = map_field_original_to_scaled(run_orig.final_state, tau1)
    interp = trig_interpolate(phi_from_psi, grid.points)
    mismatch = float(
        np.linalg.norm(interp - record.final_state.values)
        / np.linalg.norm(record.final_state.values)
    )
    context["model"] = model_scaled
    context["dual_frame_mismatch"] = mismatch
    return record, None


def _execute_sg_compare(cfg: dict, context: dict):
    table = cfg.get("sg", {})
    epsilons = [float(e) for e in table.get("epsilons", [0.1])]
    k = table.get("k", 0.5)
    f_amp = table.get("F_amplitude", 0.15)
    scaling = sine_gordon_scaling(k, 1.0)
    psi_grid = make_grid(table.get("psi_n", 512), table.get("psi_length", 48.0))
    amp = table.get("envelope_amplitude", 0.8)
    width = table.get("envelope_width", 2.0)
    psi0 = ComplexField(psi_grid, amp * np.exp(-((psi_grid.points / width) ** 2)) + 0j)
    x_ns = [int(v) for v in table.get("x_n", [512] * len(epsilons))]
    x_lens = [float(v) for v in table.get("x_length", [256.0] * len(epsilons))]
    dts = [float(v) for v in table.get("dt", [0.05] * len(epsilons))]
    if not (len(x_ns) == len(x_lens) == len(dts) == len(epsilons)):
        raise ConfigError("[sg]: x_n, x_length, dt must match epsilons in length")

    model = ModelSpec(
        kind="original", forcing=ForcingSpec("constant", f_amp, 0.0, 0.0)
    )
    mismatches = {}
    record = None
    for eps, x_n, x_len, dt_x in zip(epsilons, x_ns, x_lens, dts):
        t_star = 0.5 / eps**2
        run = run_trajectory(
            psi0,
            StepperConfig(dt=1e-3, t_start=0.0, t_end=eps**2 * t_star,
                          record_every=50),
            model,
        )
        params = sg.SGParams(
            epsilon=eps, k=k, f=8.0 * scaling.omega**1.5 * f_amp, mu=0.0
        )
        xgrid = make_grid(x_n, x_len)
        zeta0 = scaling.zeta_scale * eps * scaling.omega * xgrid.points
        a0 = trig_interpolate(psi0, zeta0)
        a0[np.abs(zeta0) > 0.5 * psi_grid.length] = 0.0
        a0 = scaling.amplitude_scale * a0
        state = sg.sg_initial_state(a0, xgrid, params, dt_x)
        period = 2.0 * np.pi / params.omega
        snap_times = np.arange(
            max(3.0 * dt_x, t_star - 2.6 * period), t_star + 2.6 * period,
            period / 10.0,
        )
        state, snaps, taken = sg.run_sg(state, t_star + 3.0 * period, snap_times)
        envelope = sg.demodulate_envelope(snaps, taken, params, xgrid, t_star=t_star)
        mismatches[str(eps)] = sg.compare_with_model(
            envelope, run.final_state, scaling, params, t_star
        )
        if record is None:
            record = run
    ordered = [mismatches[str(e)] for e in sorted(epsilons, reverse=True)]
    context["model"] = model
    context["sg_results"] = {
        "mismatches": mismatches,
        "monotone": bool(all(a > b for a, b in zip(ordered, ordered[1:]))),
        "epsilons": epsilons,
    }
    return record, None


_EXECUTORS = {
    "pde": _execute_pde,
    "ode": _execute_ode,
    "balance_scan": _execute_balance_scan,
    "h0_scan": _execute_h0_scan,
    "dual_frame": _execute_dual_frame,
    "sg_compare": _execute_sg_compare,
}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_trajectory_csv(record: TrajectoryRecord, path: Path) -> None:
    lines = [",".join(TrajectoryRecord.COLUMNS)]
    for i in range(len(record)):
        lines.append(
            ",".join(_fmt(record.column(name)[i]) for name in TrajectoryRecord.COLUMNS)
        )
    path.write_text("\n".join(lines) + "\n")


def write_scan_csv(scan_table: dict, path: Path) -> None:
    names = list(scan_table.keys())
    count = len(scan_table[names[0]])
    lines = [",".join(names)]
    for i in range(count):
        lines.append(",".join(_fmt(scan_table[name][i]) for name in names))
    path.write_text("\n".join(lines) + "\n")


def _locked_summary(locked) -> dict:
    return {
        "eta0": locked.eta0,
        "kappa0": locked.kappa0,
        "mu": locked.mu,
        "A": locked.A,
        "drive_amplitude": locked.drive_amplitude,
        "alpha_branch": locked.alpha,
        "branch_reference_angle": asymptotics.branch_reference_angle(locked),
        "eta0_printed_muform": locked.eta0_muform,
        "constraint_residual": locked.constraint_residual,
    }


def run_scenario(cfg: dict, out_dir) -> tuple[int, dict]:
    """Execute a validated scenario config; returns (exit_code, summary)."""
    errors = validate_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))
    name = cfg["scenario"]["name"]
    kind = cfg["scenario"]["kind"]
    run_dir = Path(out_dir) / name
    run_dir.mkdir(parents=True, exist_ok=True)
    context: dict = {}
    exit_code = 0
    try:
        record, scan_table = _EXECUTORS[kind](cfg, context)
    except BlowUpError as err:
        summary = {
            "name": name,
            "config": cfg,
            "results": {"aborted": True, "failure_time": err.t},
        }
        (run_dir / "summary.json").write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n"
        )
        return 3, summary

    results: dict = {
        "solver": {
            "steps": record.steps,
            "records": len(record),
            "aborted": record.aborted,
            "abort_time": record.abort_time,
        }
    }
    if record.aborted:
        exit_code = 3
        results["failure_time"] = record.abort_time
    if "locked_solution" in context:
        results["locked_solution"] = _locked_summary(context["locked_solution"])
        if "alpha_reference" in context:
            results["locked_solution"]["alpha_matched"] = context["alpha_reference"]
    if "dual_frame_mismatch" in context:
        results["dual_frame"] = {"mismatch": context["dual_frame_mismatch"]}
    if "sg_results" in context:
        results["sg_compare"] = context["sg_results"]

    fits = {}
    for entry in cfg.get("analysis", []):
        akind = entry.get("kind")
        label = entry.get("name", akind)
        if akind == "power_law_fit":
            fits[label] = _run_fit(entry, record, scan_table)
        elif akind == "lock_check":
            results["lock"] = _run_lock_check(entry, record, context)
        elif akind == "eta_band":
            results["eta_band"] = _run_eta_band(entry, record)
        elif akind == "mass_drift":
            results["mass_drift"] = _run_mass_drift(record)
        elif akind == "order_check":
            results["order_check"] = _run_order_check(
                entry, cfg, context["model"], context["grid"]
            )
        elif akind == "ode_track":
            results["ode_track"] = _run_ode_track(entry, record, context)
        elif akind == "amplitude_ratio_band":
            results["amplitude_ratio_band"] = _run_amplitude_ratio_band(entry, record)
        elif akind == "dual_frame_check":
            if "dual_frame" not in results:
                raise ConfigError("[analysis]: dual_frame_check needs a dual_frame scenario")
        else:
            raise ConfigError(f"[analysis].kind: unknown analysis {akind!r}")
    if fits:
        results["fits"] = fits

    forcing_echo = None
    model = context.get("model")
    if isinstance(model, ModelSpec):
        forcing_echo = {
            "law": model.forcing.law,
            "coefficient": model.forcing.coefficient,
            "exponent": model.forcing.exponent,
            "phase": model.forcing.phase,
        }
    summary = {
        "name": name,
        "config": cfg,
        "resolved_forcing": forcing_echo,
        "results": results,
    }
    write_trajectory_csv(record, run_dir / "trajectory.csv")
    if scan_table is not None:
        write_scan_csv(scan_table, run_dir / "scan.csv")
    (run_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n"
    )
    return exit_code, summary


# ---------------------------------------------------------------------------
# bundled scenarios and entry point
# ---------------------------------------------------------------------------

def bundled_scenarios() -> dict:
    """Mapping of bundled scenario names to their resource paths."""
    from importlib import resources

    out = {}
    base = resources.files("autoresonance.scenarios")
    for item in sorted(base.iterdir(), key=lambda p: p.name):
        if item.name.endswith(".toml"):
            out[item.name[: -len(".toml")]] = item
    return out


def bundled_scenario_path(name: str):
    scenarios = bundled_scenarios()
    if name not in scenarios:
        raise ConfigError(f"unknown bundled scenario {name!r}")
    return scenarios[name]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="autoresonance",
        description="Run driven-Schrodinger autoresonance scenarios",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario config")
    run_p.add_argument("config", help="path to a .toml config or a bundled scenario name")
    run_p.add_argument("--out", default=".", help="output directory (default: cwd)")
    run_p.add_argument(
        "--override", action="append", default=[],
        metavar="KEY=VALUE", help="override section.key after file parse",
    )
    val_p = sub.add_parser("validate", help="validate a config without running")
    val_p.add_argument("config")
    sub.add_parser("list", help="list bundled scenarios")
    args = parser.parse_args(argv)

    if args.command == "list":
        for name in bundled_scenarios():
            print(name)
        return 0

    try:
        path = Path(args.config)
        if not path.is_file():
            path = bundled_scenario_path(args.config)
        cfg = load_config(path)
    except (ConfigError, OSError, tomllib.TOMLDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    if args.command == "validate":
        errors = validate_config(cfg)
        if errors:
            for line in errors:
                print(f"error: {line}", file=sys.stderr)
            return 2
        print("ok")
        return 0

    try:
        cfg = apply_overrides(cfg, args.override)
        code, summary = run_scenario(cfg, args.out)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if code == 0:
        print(f"ok: {summary['name']}")
    else:
        print(f"aborted: {summary['name']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
