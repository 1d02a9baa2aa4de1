import json
import re

import numpy as np
import pytest

from autoresonance.cli import (
    ConfigError,
    apply_overrides,
    bundled_scenario_path,
    bundled_scenarios,
    load_config,
    main,
    run_scenario,
    validate_config,
)

FAST_ODE = {
    "scenario": {"name": "fast_ode", "kind": "ode"},
    "model": {"kind": "ode_primary_resonance"},
    "forcing": {"law": "power", "coefficient": 0.5, "exponent": -0.5,
                "phase": 0.7 + np.pi / 2},
    "stepper": {"dt": 1e-3, "t_start": 1.0, "t_end": 5.0, "record_every": 100},
    "init": {"type": "ode_special", "a": 0.7},
    "analysis": [{"kind": "ode_track", "name": "track"}],
}


def test_bundled_scenarios_cover_acceptance():
    names = set(bundled_scenarios())
    assert len(names) >= 6
    assert {
        "ode_special", "autoresonance_lock", "dual_frame", "dissipation_decay",
        "conservation_order", "h0_decay", "sg_envelope",
    } <= names


def test_bundled_configs_all_validate():
    for name, path in bundled_scenarios().items():
        assert validate_config(load_config(path)) == [], name


def test_validate_reports_unknown_keys():
    cfg = {"scenario": {"name": "x", "kind": "ode"}, "model": {"kinnd": "oops"}}
    errors = validate_config(cfg)
    assert any("kinnd" in e for e in errors)


def test_validate_reports_missing_required():
    errors = validate_config({"model": {"kind": "scaled"}})
    assert any("scenario" in e and "required" in e for e in errors)


def test_validate_reports_bad_types():
    cfg = {"scenario": {"name": "x", "kind": "ode"}, "grid": {"n": "big"}}
    errors = validate_config(cfg)
    assert any("grid" in e and "n" in e for e in errors)


def test_overrides_apply_and_reject_malformed():
    cfg = {"scenario": {"name": "x", "kind": "ode"}}
    out = apply_overrides(cfg, ["stepper.dt=5e-4", "init.a=0.3"])
    assert out["stepper"]["dt"] == 5e-4
    assert out["init"]["a"] == 0.3
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["stepperdt"])
    with pytest.raises(ConfigError):
        apply_overrides(cfg, ["a.b.c=1"])


def test_run_scenario_writes_artifacts(tmp_path):
    code, summary = run_scenario(FAST_ODE, tmp_path)
    assert code == 0
    run_dir = tmp_path / "fast_ode"
    csv = (run_dir / "trajectory.csv").read_text().splitlines()
    assert csv[0] == (
        "time,tau,mass,re_momentum,im_momentum,peak_amp,eta,kappa,Omega,V,"
        "alpha,forcing_amp"
    )
    assert len(csv) > 10
    loaded = json.loads((run_dir / "summary.json").read_text())
    assert loaded["results"]["ode_track"]["max_error"] < 1e-6
    assert loaded["config"]["stepper"]["dt"] == 1e-3


def test_run_scenario_outputs_are_byte_identical(tmp_path):
    run_scenario(FAST_ODE, tmp_path / "a")
    run_scenario(FAST_ODE, tmp_path / "b")
    for fname in ("trajectory.csv", "summary.json"):
        a = (tmp_path / "a" / "fast_ode" / fname).read_bytes()
        b = (tmp_path / "b" / "fast_ode" / fname).read_bytes()
        assert a == b, fname


def test_run_scenario_rejects_unknown_analysis(tmp_path):
    bad = json.loads(json.dumps(FAST_ODE))
    bad["analysis"] = [{"kind": "mystery"}]
    errors = validate_config(bad)
    assert errors == []  # schema-level kind is free-form; execution rejects it
    with pytest.raises(ConfigError):
        run_scenario(bad, tmp_path)


def test_run_scenario_exit_3_on_blowup(tmp_path):
    cfg = {
        "scenario": {"name": "blowup", "kind": "pde"},
        "model": {"kind": "unperturbed_nls"},
        "grid": {"n": 256, "length": 20.0},
        "stepper": {"dt": 0.5, "t_start": 0.0, "t_end": 40.0,
                    "record_every": 4, "integrator": "rk4"},
        "init": {"type": "soliton", "eta": 1.0},
    }
    code, summary = run_scenario(cfg, tmp_path)
    assert code == 3
    assert summary["results"]["failure_time"] is not None


def test_main_validate_and_list(tmp_path, capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "autoresonance_lock" in out
    path = bundled_scenario_path("ode_special")
    assert main(["validate", str(path)]) == 0
    bad = tmp_path / "bad.toml"
    bad.write_text('[scenario]\nname = "x"\nkind = "ode"\n[grid]\nboom = 1\n')
    assert main(["validate", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "boom" in err


def test_main_rejects_malformed_toml(tmp_path, capsys):
    bad = tmp_path / "broken.toml"
    bad.write_text("[scenario\nname=")
    assert main(["validate", str(bad)]) == 2


def test_main_run_bundled_by_name(tmp_path, capsys):
    assert main([
        "run", "dissipation_decay", "--out", str(tmp_path),
        "--override", "scan.points=12",
    ]) == 0
    summary = json.loads(
        (tmp_path / "dissipation_decay" / "summary.json").read_text()
    )
    assert summary["config"]["scan"]["points"] == 12
    fit = summary["results"]["fits"]["eta_decay"]
    assert fit["exponent"] == pytest.approx(-0.25, abs=0.01)


def test_summary_echoes_resolved_forcing(tmp_path):
    code, summary = run_scenario(FAST_ODE, tmp_path)
    assert summary["resolved_forcing"]["coefficient"] == 0.5
    assert summary["resolved_forcing"]["exponent"] == -0.5


def test_pde_init_zero_and_file(tmp_path):
    import numpy as np

    base = {
        "scenario": {"name": "init_modes", "kind": "pde"},
        "model": {"kind": "unperturbed_nls"},
        "grid": {"n": 256, "length": 40.0},
        "stepper": {"dt": 1e-3, "t_start": 0.0, "t_end": 0.05, "record_every": 10},
        "init": {"type": "zero"},
    }
    code, summary = run_scenario(base, tmp_path / "zero")
    assert code == 0

    from autoresonance.models import SolitonParams, soliton_field
    from autoresonance.numerics import make_grid

    field = soliton_field(SolitonParams(eta=0.5), make_grid(256, 40.0), tail_check=False)
    np.savez(tmp_path / "state.npz", values=field.values)
    cfg = json.loads(json.dumps(base))
    cfg["scenario"]["name"] = "init_file"
    cfg["init"] = {"type": "file", "path": str(tmp_path / "state.npz")}
    code, summary = run_scenario(cfg, tmp_path / "file")
    assert code == 0
    table = (tmp_path / "file" / "init_file" / "trajectory.csv").read_text()
    first_mass = float(table.splitlines()[1].split(",")[2])
    assert first_mass == pytest.approx(2.0, abs=1e-8)

    cfg["init"] = {"type": "file", "path": str(tmp_path / "missing.npz")}
    with pytest.raises(ConfigError):
        run_scenario(cfg, tmp_path / "broken")
