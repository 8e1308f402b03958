"""End-to-end CLI tests: file outputs, exit codes, determinism."""

from __future__ import annotations

import numpy as np

from smcpid import Scenario, parse_scenario
from smcpid.cli import main

TRACE_HEADER = "t,r,y,e,e_dot,s,u_pid,u_smc,u_cmd,u_applied,V,V_dot,d_out"


def test_emit_default_round_trips(capsys):
    assert main(["emit-default"]) == 0
    out = capsys.readouterr().out
    assert parse_scenario(out) == Scenario()


def test_emit_default_to_file(tmp_path):
    target = tmp_path / "scenario.yaml"
    assert main(["emit-default", "--out", str(target)]) == 0
    assert parse_scenario(target.read_text()) == Scenario()


def test_simulate_default_scenario(tmp_path):
    out = tmp_path / "run"
    assert main(["simulate", "--out", str(out)]) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert lines[0] == TRACE_HEADER
    assert len(lines) == 501  # header + 5 s / 10 ms rows
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "2"
    assert (out / "metrics.csv").exists()
    stability = (out / "stability.txt").read_text()
    for key in ("delta_bound_est", "eta_min", "gain_condition_met",
                "decrease_violations", "epsilon_est", "b_used"):
        assert key in stability


def test_simulate_traces_are_byte_identical(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--out", str(out_a)]) == 0
    assert main(["simulate", "--out", str(out_b)]) == 0
    assert (out_a / "trace.csv").read_bytes() == (out_b / "trace.csv").read_bytes()


def test_simulate_open_loop_scenario(tmp_path):
    scenario = tmp_path / "ol.yaml"
    scenario.write_text("duration: 1\nreference: []\ncontroller:\n  open_loop: 1.0\n")
    out = tmp_path / "run"
    assert main(["simulate", "--scenario", str(scenario), "--out", str(out)]) == 0
    assert "not applicable" in (out / "stability.txt").read_text()


def test_simulate_rejects_unknown_key_with_line(tmp_path, capsys):
    scenario = tmp_path / "bad.yaml"
    scenario.write_text("controller:\n  pid: {kp: 1, ki: 1, kd: 1}\n  smc:\n    lamda1: 1\n")
    assert main(["simulate", "--scenario", str(scenario), "--out", str(tmp_path / "x")]) == 1
    err = capsys.readouterr().err
    assert "lamda1" in err and "line 4" in err


def test_simulate_rejects_zero_duration(tmp_path, capsys):
    scenario = tmp_path / "bad.yaml"
    scenario.write_text("duration: 0\n")
    assert main(["simulate", "--scenario", str(scenario), "--out", str(tmp_path / "x")]) == 1
    assert "duration" in capsys.readouterr().err


def test_compare_default_controllers(tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", "--out", str(out)]) == 0
    for name in ("smcpid", "kuhn", "naive"):
        assert (out / f"trace_{name}.csv").exists()
    comparison = (out / "comparison.csv").read_text().splitlines()
    assert len(comparison) == 4
    assert comparison[0].startswith("label,overshoot_pct")
    assert "rank_iae" in comparison[0]
    plot = (out / "plot_traces.py").read_text()
    assert "trace_smcpid.csv" in plot


def test_compare_single_controller(tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", "--controllers", "kuhn", "--out", str(out)]) == 0
    assert len((out / "comparison.csv").read_text().splitlines()) == 2


def test_compare_rejects_duplicates(tmp_path, capsys):
    assert main(["compare", "--controllers", "kuhn,kuhn",
                 "--out", str(tmp_path / "x")]) == 1
    assert "duplicate" in capsys.readouterr().err


def test_compare_rejects_unknown_preset_listing_valid(tmp_path, capsys):
    assert main(["compare", "--controllers", "smcpid,fuzzy",
                 "--out", str(tmp_path / "x")]) == 1
    err = capsys.readouterr().err
    for name in ("smcpid", "kuhn", "naive"):
        assert name in err


def test_sweep_writes_points_in_input_order(tmp_path):
    out = tmp_path / "sweep"
    # note the = form: a leading dash would otherwise read as an option
    assert main(["sweep", "--axis", "plant.dK", "--values=-0.2,0,0.2",
                 "--out", str(out)]) == 0
    for i in range(3):
        assert (out / f"point_{i:02d}" / "trace.csv").exists()
        assert (out / f"point_{i:02d}" / "stability.txt").exists()
    summary = (out / "sweep_summary.csv").read_text().splitlines()
    assert summary[0].startswith("value,iae")
    values = [float(line.split(",")[0]) for line in summary[1:]]
    assert values == [-0.2, 0.0, 0.2]
    assert summary[1].split(",")[-1] in ("true", "false")


def test_sweep_eta_zero_matches_pure_pid(tmp_path):
    scenario = tmp_path / "sc.yaml"
    scenario.write_text("""\
duration: 1
controller:
  pid: {kp: 25.1, ki: 30.5, kd: 0.293}
  smc: {lambda1: 1.0, lambda2: 0.05, eta: 1.0, phi: 0.05}
""")
    out = tmp_path / "sweep"
    assert main(["sweep", "--scenario", str(scenario), "--axis", "smc.eta",
                 "--values", "0,1", "--out", str(out)]) == 0

    pid_only = tmp_path / "pidonly.yaml"
    pid_only.write_text("""\
duration: 1
controller:
  pid: {kp: 25.1, ki: 30.5, kd: 0.293}
""")
    ref = tmp_path / "ref"
    assert main(["simulate", "--scenario", str(pid_only), "--out", str(ref)]) == 0

    eta0 = np.genfromtxt(out / "point_00" / "trace.csv", delimiter=",", names=True)
    pure = np.genfromtxt(ref / "trace.csv", delimiter=",", names=True)
    assert np.array_equal(eta0["y"], pure["y"])
    assert np.array_equal(eta0["u_applied"], pure["u_applied"])


def test_sweep_rejects_time_constant_collapse(tmp_path, capsys):
    out = tmp_path / "sweep"
    assert main(["sweep", "--axis", "plant.dTau", "--values", "-1.0",
                 "--out", str(out)]) == 1
    assert "time_constant" in capsys.readouterr().err
    assert not out.exists()  # rejected before any point ran


def test_sweep_rejects_unknown_axis(tmp_path, capsys):
    assert main(["sweep", "--axis", "plant.dk", "--values", "0",
                 "--out", str(tmp_path / "x")]) == 1
    assert "plant.dK" in capsys.readouterr().err


def test_sweep_rejects_non_numeric_values(tmp_path, capsys):
    assert main(["sweep", "--axis", "plant.dK", "--values", "a,b",
                 "--out", str(tmp_path / "x")]) == 1
    assert "comma list" in capsys.readouterr().err


def test_seed_override_changes_noisy_run(tmp_path):
    scenario = tmp_path / "noisy.yaml"
    scenario.write_text("duration: 1\nnoise_amplitude: 0.01\n"
                        "controller:\n  preset: kuhn\n")
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--scenario", str(scenario), "--out", str(out_a),
                 "--seed", "1"]) == 0
    assert main(["simulate", "--scenario", str(scenario), "--out", str(out_b),
                 "--seed", "2"]) == 0
    assert (out_a / "trace.csv").read_bytes() != (out_b / "trace.csv").read_bytes()


def test_band_flag_changes_settling_metric(tmp_path):
    out_tight = tmp_path / "tight"
    out_loose = tmp_path / "loose"
    args = ["simulate", "--out"]
    assert main(args + [str(out_tight), "--band", "0.02"]) == 0
    assert main(args + [str(out_loose), "--band", "0.2"]) == 0
    header = (out_tight / "metrics.csv").read_text().splitlines()[0].split(",")
    idx = header.index("settling_time")
    tight = (out_tight / "metrics.csv").read_text().splitlines()[1].split(",")[idx]
    loose = (out_loose / "metrics.csv").read_text().splitlines()[1].split(",")[idx]
    assert tight != loose
