"""Scenario files: a small YAML schema mapping onto :class:`smcpid.sim.Scenario`.

Every key is validated against the schema before values are touched, and
unknown keys are rejected with the offending name and line number, so typos
like ``lamda1`` fail loudly instead of silently running defaults. Missing
sections fall back to the built-in defaults (nominal plant, ``smcpid``
controller preset, 400 RPM step, 5 s).
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .controllers import PID_PRESETS, PidGains, SmcGains
from .plant import PlantModel
from .sim import (
    ControllerSpec,
    DisturbanceSegment,
    OpenLoop,
    ReferenceSegment,
    Scenario,
)

SCHEMA_VERSION = 1


class ScenarioFileError(ValueError):
    """A scenario document failed to parse or validate."""


_CONTROLLER_SCHEMA = {
    "preset": None,
    "open_loop": None,
    "label": None,
    "hard_switching": None,
    "pid": {"kp": None, "ki": None, "kd": None, "derivative_filter_tau": None},
    "smc": {"lambda1": None, "lambda2": None, "eta": None, "phi": None},
}

_SCHEMA = {
    "version": None,
    "duration": None,
    "dt_ctrl": None,
    "dt_plant": None,
    "seed": None,
    "noise_amplitude": None,
    "controller": _CONTROLLER_SCHEMA,
    "plant": {"gain": None, "time_constant": None, "dead_time": None,
              "actuator_min": None, "actuator_max": None, "sensor_gain": None},
    "perturbation": {"dK": None, "dTau": None, "dL": None},
    "reference": [{"start": None, "kind": None, "target_rpm": None}],
    "disturbance": [{"start": None, "channel": None, "amplitude": None,
                     "kind": None, "width": None}],
}


def _line(node) -> int:
    return node.start_mark.line + 1


def _check_node(node, schema, path: str) -> None:
    """Structural walk over the composed YAML tree, rejecting unknown keys."""
    if isinstance(schema, dict):
        if not isinstance(node, yaml.MappingNode):
            raise ScenarioFileError(
                f"{path or 'document'} must be a mapping (line {_line(node)})")
        for key_node, value_node in node.value:
            key = key_node.value
            where = f"{path}.{key}" if path else key
            if key not in schema:
                raise ScenarioFileError(
                    f"unknown key {key!r} at line {_line(key_node)}"
                    + (f" (in section {path!r})" if path else ""))
            if schema[key] is not None:
                _check_node(value_node, schema[key], where)
    elif isinstance(schema, list):
        if not isinstance(node, yaml.SequenceNode):
            raise ScenarioFileError(
                f"{path} must be a list (line {_line(node)})")
        for i, item in enumerate(node.value):
            _check_node(item, schema[0], f"{path}[{i}]")


def _number(data, key, default, path="") -> float:
    if key not in data or data[key] is None:
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        where = f"{path}.{key}" if path else key
        raise ScenarioFileError(f"{where} must be a number, got {value!r}")
    return float(value)


def _build_controller(section) -> str | ControllerSpec | OpenLoop:
    if "open_loop" in section:
        if len(section) > 1:
            raise ScenarioFileError("controller.open_loop excludes other keys")
        return OpenLoop(_number(section, "open_loop", 0.0, "controller"))
    if "preset" in section:
        if len(section) > 1:
            raise ScenarioFileError("controller.preset excludes explicit gains")
        preset = section["preset"]
        if preset not in PID_PRESETS:
            raise ScenarioFileError(
                f"unknown controller preset {preset!r}; "
                f"valid presets: {', '.join(sorted(PID_PRESETS))}")
        return preset
    if "pid" not in section:
        raise ScenarioFileError(
            "controller section needs 'preset', 'open_loop' or explicit 'pid' gains")
    pid_sec = section["pid"] or {}
    for key in ("kp", "ki", "kd"):
        if key not in pid_sec:
            raise ScenarioFileError(f"controller.pid.{key} is required")
    pid = PidGains(
        kp=_number(pid_sec, "kp", 0.0, "controller.pid"),
        ki=_number(pid_sec, "ki", 0.0, "controller.pid"),
        kd=_number(pid_sec, "kd", 0.0, "controller.pid"),
        derivative_filter_tau=_number(pid_sec, "derivative_filter_tau", 0.0,
                                      "controller.pid"),
    )
    smc_sec = section.get("smc") or {}
    defaults = SmcGains(eta=0.0)  # explicit PID without an smc section runs PID-only
    smc = SmcGains(
        lambda1=_number(smc_sec, "lambda1", defaults.lambda1, "controller.smc"),
        lambda2=_number(smc_sec, "lambda2", defaults.lambda2, "controller.smc"),
        eta=_number(smc_sec, "eta", defaults.eta, "controller.smc"),
        phi=_number(smc_sec, "phi", defaults.phi, "controller.smc"),
    )
    hard = section.get("hard_switching", False)
    if not isinstance(hard, bool):
        raise ScenarioFileError("controller.hard_switching must be true or false")
    return ControllerSpec(pid=pid, smc=smc,
                          label=str(section.get("label", "custom")),
                          hard_switching=hard)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parse and validate a scenario document into a :class:`Scenario`."""
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ScenarioFileError(f"{source}: not valid YAML: {exc}") from exc
    if root is None:
        return Scenario()
    try:
        _check_node(root, _SCHEMA, "")
        data = yaml.safe_load(text)

        version = data.get("version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ScenarioFileError(
                f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")

        defaults = Scenario()
        plant_sec = data.get("plant") or {}
        nominal = PlantModel()
        plant = PlantModel(
            gain=_number(plant_sec, "gain", nominal.gain, "plant"),
            time_constant=_number(plant_sec, "time_constant",
                                  nominal.time_constant, "plant"),
            dead_time=_number(plant_sec, "dead_time", nominal.dead_time, "plant"),
            actuator_min=_number(plant_sec, "actuator_min",
                                 nominal.actuator_min, "plant"),
            actuator_max=_number(plant_sec, "actuator_max",
                                 nominal.actuator_max, "plant"),
            sensor_gain=_number(plant_sec, "sensor_gain",
                                nominal.sensor_gain, "plant"),
        )

        pert_sec = data.get("perturbation") or {}
        perturbation = (_number(pert_sec, "dK", 0.0, "perturbation"),
                        _number(pert_sec, "dTau", 0.0, "perturbation"),
                        _number(pert_sec, "dL", 0.0, "perturbation"))

        if "reference" in data and data["reference"] is not None:
            reference = tuple(
                ReferenceSegment(
                    start=_number(seg, "start", 0.0, f"reference[{i}]"),
                    kind=str(seg.get("kind", "step")),
                    target_rpm=_number(seg, "target_rpm", 0.0, f"reference[{i}]"),
                )
                for i, seg in enumerate(data["reference"]))
        else:
            reference = defaults.reference

        disturbance = tuple(
            DisturbanceSegment(
                start=_number(seg, "start", 0.0, f"disturbance[{i}]"),
                channel=str(seg.get("channel", "output")),
                amplitude=_number(seg, "amplitude", 0.0, f"disturbance[{i}]"),
                kind=str(seg.get("kind", "step")),
                width=_number(seg, "width", 0.0, f"disturbance[{i}]"),
            )
            for i, seg in enumerate(data.get("disturbance") or ()))

        controller = (_build_controller(data["controller"])
                      if data.get("controller") else defaults.controller)

        seed = data.get("seed", defaults.seed)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ScenarioFileError(f"seed must be an integer, got {seed!r}")

        return Scenario(
            reference=reference,
            disturbance=disturbance,
            perturbation=perturbation,
            duration=_number(data, "duration", defaults.duration),
            dt_ctrl=_number(data, "dt_ctrl", defaults.dt_ctrl),
            dt_plant=_number(data, "dt_plant", defaults.dt_plant),
            controller=controller,
            seed=seed,
            noise_amplitude=_number(data, "noise_amplitude",
                                    defaults.noise_amplitude),
            plant=plant,
        )
    except ScenarioFileError as exc:
        raise ScenarioFileError(f"{source}: {exc}") from None
    except (ValueError, TypeError) as exc:
        raise ScenarioFileError(f"{source}: {exc}") from exc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFileError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text, source=str(path))


def default_scenario_yaml() -> str:
    """The default scenario, fully spelled out; re-parses to ``Scenario()``."""
    sc = Scenario()
    plant = sc.plant
    seg = sc.reference[0]
    return f"""\
# smcpid scenario file (schema version {SCHEMA_VERSION})
version: {SCHEMA_VERSION}

duration: {sc.duration:g}
dt_ctrl: {sc.dt_ctrl:g}
dt_plant: {sc.dt_plant:g}
seed: {sc.seed}
noise_amplitude: {sc.noise_amplitude:g}

controller:
  preset: {sc.controller}

plant:
  gain: {plant.gain:g}
  time_constant: {plant.time_constant:g}
  dead_time: {plant.dead_time:g}
  actuator_min: {plant.actuator_min:g}
  actuator_max: {plant.actuator_max:g}
  sensor_gain: {plant.sensor_gain:g}

perturbation:
  dK: {sc.perturbation[0]:g}
  dTau: {sc.perturbation[1]:g}
  dL: {sc.perturbation[2]:g}

reference:
  - start: {seg.start:g}
    kind: {seg.kind}
    target_rpm: {seg.target_rpm:g}

disturbance: []
"""
