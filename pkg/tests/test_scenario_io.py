"""Scenario file parsing: defaults, round trips, strict key validation."""

from __future__ import annotations

import pytest

from smcpid import (
    ControllerSpec,
    OpenLoop,
    Scenario,
    ScenarioFileError,
    default_scenario_yaml,
    parse_scenario,
)


def test_default_document_round_trips_to_default_scenario():
    assert parse_scenario(default_scenario_yaml()) == Scenario()


def test_empty_document_gives_defaults():
    assert parse_scenario("") == Scenario()
    assert parse_scenario("version: 1\n") == Scenario()


def test_partial_document_keeps_other_defaults():
    sc = parse_scenario("duration: 2.5\ncontroller:\n  preset: kuhn\n")
    assert sc.duration == 2.5
    assert sc.controller == "kuhn"
    assert sc.dt_ctrl == 0.01
    assert sc.plant == Scenario().plant


def test_unknown_key_is_named_with_its_line():
    text = "controller:\n  pid: {kp: 1, ki: 1, kd: 1}\n  smc:\n    lamda1: 1\n"
    with pytest.raises(ScenarioFileError) as excinfo:
        parse_scenario(text)
    message = str(excinfo.value)
    assert "lamda1" in message
    assert "line 4" in message


def test_unknown_top_level_key_rejected():
    with pytest.raises(ScenarioFileError, match="durationn"):
        parse_scenario("durationn: 5\n")


def test_unknown_preset_lists_valid_names():
    with pytest.raises(ScenarioFileError) as excinfo:
        parse_scenario("controller:\n  preset: fuzzy\n")
    for name in ("smcpid", "kuhn", "naive"):
        assert name in str(excinfo.value)


def test_zero_duration_rejected():
    with pytest.raises(ScenarioFileError, match="duration"):
        parse_scenario("duration: 0\n")


def test_invalid_yaml_reports_source():
    with pytest.raises(ScenarioFileError, match="my.yaml"):
        parse_scenario("controller: [unclosed\n", source="my.yaml")


def test_explicit_gains_build_controller_spec():
    text = """\
controller:
  label: tuned
  pid: {kp: 2.0, ki: 0.5, kd: 0.1, derivative_filter_tau: 0.02}
  smc: {lambda1: 1.0, lambda2: 0.05, eta: 0.7, phi: 0.1}
  hard_switching: true
"""
    sc = parse_scenario(text)
    ctrl = sc.controller
    assert isinstance(ctrl, ControllerSpec)
    assert ctrl.pid.kp == 2.0
    assert ctrl.pid.derivative_filter_tau == 0.02
    assert ctrl.smc.eta == 0.7
    assert ctrl.label == "tuned"
    assert ctrl.hard_switching


def test_explicit_pid_without_smc_runs_pid_only():
    sc = parse_scenario("controller:\n  pid: {kp: 1, ki: 1, kd: 0}\n")
    assert isinstance(sc.controller, ControllerSpec)
    assert sc.controller.smc.eta == 0.0


def test_open_loop_controller():
    sc = parse_scenario("controller:\n  open_loop: 1.5\n")
    assert sc.controller == OpenLoop(1.5)


def test_open_loop_excludes_other_keys():
    with pytest.raises(ScenarioFileError, match="open_loop"):
        parse_scenario("controller:\n  open_loop: 1.5\n  label: x\n")


def test_missing_pid_gain_rejected():
    with pytest.raises(ScenarioFileError, match="controller.pid.kd"):
        parse_scenario("controller:\n  pid: {kp: 1, ki: 1}\n")


def test_reference_and_disturbance_segments():
    text = """\
duration: 12
reference:
  - {start: 0, kind: step, target_rpm: 400}
  - {start: 4, kind: step, target_rpm: 200}
disturbance:
  - {start: 2, channel: output, amplitude: 0.1, kind: pulse, width: 0.5}
"""
    sc = parse_scenario(text)
    assert len(sc.reference) == 2
    assert sc.reference[1].target_rpm == 200.0
    assert sc.disturbance[0].width == 0.5


def test_bad_segment_kind_rejected():
    with pytest.raises(ScenarioFileError, match="wiggle"):
        parse_scenario("reference:\n  - {start: 0, kind: wiggle, target_rpm: 10}\n")


def test_unsupported_schema_version():
    with pytest.raises(ScenarioFileError, match="version"):
        parse_scenario("version: 2\n")


def test_non_numeric_value_rejected():
    with pytest.raises(ScenarioFileError, match="duration"):
        parse_scenario("duration: fast\n")


def test_non_integer_seed_rejected():
    with pytest.raises(ScenarioFileError, match="seed"):
        parse_scenario("seed: 1.5\n")


def test_plant_overrides():
    sc = parse_scenario("plant:\n  gain: 1.2\n  actuator_max: 5\n")
    assert sc.plant.gain == 1.2
    assert sc.plant.actuator_max == 5.0
    assert sc.plant.time_constant == Scenario().plant.time_constant


def test_perturbation_section():
    sc = parse_scenario("perturbation: {dK: 0.2, dTau: -0.1}\n")
    assert sc.perturbation == (0.2, -0.1, 0.0)


def test_load_scenario_missing_file(tmp_path):
    from smcpid import load_scenario

    with pytest.raises(ScenarioFileError, match="cannot read"):
        load_scenario(tmp_path / "absent.yaml")
