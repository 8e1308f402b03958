"""Closed-loop runs: reference/disturbance profiles, dual time grid, trace logs.

The controller updates every ``dt_ctrl`` (default 10 ms); between updates the
command is held while the plant integrates at the finer ``dt_plant`` (default
1 ms). Each run produces a :class:`RunRecord` with one row per controller tick
carrying the full component trace, which the metrics and stability modules
consume. Runs share nothing mutable, so sweeps are embarrassingly parallel;
for a fixed seed a scenario reproduces bit-identical records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .controllers import (
    PID_PRESETS,
    SMC_PRESET,
    ControllerState,
    PidGains,
    SmcGains,
    smcpid_update,
)
from .plant import NOMINAL, PlantModel, PlantState, initial_state, perturbed, plant_step

_TIME_EPS = 1e-9  # guards floor/ratio arithmetic on times that are not exact binary


@dataclass(frozen=True)
class ReferenceSegment:
    """One piece of the reference profile, active from ``start`` until the next
    segment begins. ``step`` jumps to the target, ``ramp`` slews linearly from
    the previous segment's end value, ``hold`` keeps that end value."""

    start: float
    kind: str = "step"
    target_rpm: float = 0.0

    def __post_init__(self):
        if self.kind not in ("step", "ramp", "hold"):
            raise ValueError(f"unknown reference kind {self.kind!r} "
                             "(expected step, ramp or hold)")
        if self.start < 0.0 or not math.isfinite(self.start):
            raise ValueError(f"segment start must be a nonnegative time, got {self.start}")
        if not math.isfinite(self.target_rpm):
            raise ValueError("segment target must be finite")


@dataclass(frozen=True)
class DisturbanceSegment:
    """Additive disturbance on the sensor (``output``) or plant input
    (``input``) channel; a ``pulse`` lasts ``width`` seconds, a ``step``
    stays on. Contributions of overlapping segments add up."""

    start: float
    channel: str = "output"
    amplitude: float = 0.0
    kind: str = "step"
    width: float = 0.0

    def __post_init__(self):
        if self.channel not in ("output", "input"):
            raise ValueError(f"unknown disturbance channel {self.channel!r}")
        if self.kind not in ("step", "pulse"):
            raise ValueError(f"unknown disturbance kind {self.kind!r}")
        if self.kind == "pulse" and self.width <= 0.0:
            raise ValueError("pulse disturbances need a positive width")
        if self.start < 0.0:
            raise ValueError("disturbance start must be nonnegative")
        if not math.isfinite(self.amplitude):
            raise ValueError("disturbance amplitude must be finite")


@dataclass(frozen=True)
class ControllerSpec:
    """Explicit controller configuration: PID gains plus the switching term.

    ``hard_switching`` swaps the boundary-layer saturation for a pure relay,
    which is only useful for chattering comparisons.
    """

    pid: PidGains
    smc: SmcGains
    label: str = "custom"
    hard_switching: bool = False


@dataclass(frozen=True)
class OpenLoop:
    """No feedback: a constant command driving the plant (model checks)."""

    u: float
    label: str = "open_loop"


def resolve_controller(controller) -> ControllerSpec | OpenLoop:
    """Map a preset name to its gain set; pass explicit specs through.

    The ``smcpid`` preset carries the full switching term; the two comparison
    PID presets (``kuhn``, ``naive``) run with eta = 0, i.e. PID only, while
    keeping the surface weights so their runs still log a surface value.
    """
    if isinstance(controller, (ControllerSpec, OpenLoop)):
        return controller
    if isinstance(controller, str):
        if controller not in PID_PRESETS:
            raise ValueError(f"unknown controller preset {controller!r}; "
                             f"valid presets: {', '.join(sorted(PID_PRESETS))}")
        eta = SMC_PRESET.eta if controller == "smcpid" else 0.0
        return ControllerSpec(
            pid=PID_PRESETS[controller],
            smc=replace(SMC_PRESET, eta=eta),
            label=controller,
        )
    raise TypeError(f"controller must be a preset name, ControllerSpec or OpenLoop, "
                    f"got {type(controller).__name__}")


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one closed-loop run."""

    reference: tuple[ReferenceSegment, ...] = (ReferenceSegment(0.0, "step", 400.0),)
    disturbance: tuple[DisturbanceSegment, ...] = ()
    perturbation: tuple[float, float, float] = (0.0, 0.0, 0.0)
    duration: float = 5.0
    dt_ctrl: float = 0.01
    dt_plant: float = 0.001
    controller: str | ControllerSpec | OpenLoop = "smcpid"
    seed: int = 0
    noise_amplitude: float = 0.0
    plant: PlantModel = field(default_factory=lambda: NOMINAL)

    def __post_init__(self):
        if self.duration <= 0.0 or not math.isfinite(self.duration):
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.dt_ctrl <= 0.0 or self.dt_plant <= 0.0:
            raise ValueError("dt_ctrl and dt_plant must be positive")
        if self.duration + _TIME_EPS < self.dt_ctrl:
            raise ValueError("duration is shorter than one controller period")
        ratio = self.dt_ctrl / self.dt_plant
        if abs(ratio - round(ratio)) > 1e-6 or round(ratio) < 1:
            raise ValueError(f"dt_ctrl={self.dt_ctrl} must be an integer multiple "
                             f"of dt_plant={self.dt_plant}")
        if self.noise_amplitude < 0.0:
            raise ValueError("noise_amplitude must be nonnegative")
        starts = [seg.start for seg in self.reference]
        if starts:
            if starts[0] != 0.0:
                raise ValueError("the first reference segment must start at t=0")
            if any(b <= a for a, b in zip(starts, starts[1:])):
                raise ValueError("reference segments must have increasing start times")
            if starts[-1] > self.duration:
                raise ValueError("reference segment starts beyond the run duration")
        resolve_controller(self.controller)  # fail early on bad preset names

    @property
    def substeps(self) -> int:
        return int(round(self.dt_ctrl / self.dt_plant))

    @property
    def ticks(self) -> int:
        return int(math.floor(self.duration / self.dt_ctrl + _TIME_EPS))


def step_scenario(controller="smcpid", rpm: float = 400.0, duration: float = 5.0,
                  **overrides) -> Scenario:
    """Canonical benchmark scenario: a single speed step from rest."""
    return Scenario(
        reference=(ReferenceSegment(0.0, "step", rpm),),
        duration=duration,
        controller=controller,
        **overrides,
    )


def varying_scenario(controller="smcpid", **overrides) -> Scenario:
    """Multi-step speed profile 400 / 200 / 500 RPM over 12 s, exercising
    acceleration, deceleration and re-acceleration."""
    return Scenario(
        reference=(
            ReferenceSegment(0.0, "step", 400.0),
            ReferenceSegment(4.0, "step", 200.0),
            ReferenceSegment(8.0, "step", 500.0),
        ),
        duration=12.0,
        controller=controller,
        **overrides,
    )


def open_loop_scenario(u: float, duration: float = 5.0, **overrides) -> Scenario:
    """Constant-command run with an empty reference profile."""
    return Scenario(
        reference=(),
        duration=duration,
        controller=OpenLoop(u),
        **overrides,
    )


def reference_at(profile: tuple[ReferenceSegment, ...], t: float,
                 sensor_gain: float = 200.0, duration: float | None = None) -> float:
    """Reference voltage at time t; targets are stated in RPM and converted
    through the sensor gain. An empty profile is zero everywhere."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if duration is not None and t > duration + _TIME_EPS:
        raise ValueError(f"t={t} lies beyond the run duration {duration}")
    if not profile:
        return 0.0

    # End value of each segment, needed by ramp/hold segments that refer back.
    end_values = []
    prev_end = 0.0
    for seg in profile:
        if seg.kind == "hold":
            end_values.append(prev_end)
        else:  # step and ramp both finish at their target
            end_values.append(seg.target_rpm / sensor_gain)
        prev_end = end_values[-1]

    idx = 0
    for i, seg in enumerate(profile):
        if t >= seg.start - _TIME_EPS:
            idx = i
    seg = profile[idx]
    prev_end = end_values[idx - 1] if idx > 0 else 0.0
    if seg.kind == "step":
        return seg.target_rpm / sensor_gain
    if seg.kind == "hold":
        return prev_end
    # ramp: slew from the previous end value, reaching the target when the
    # next segment begins (or at the end of the run for a trailing ramp)
    if idx + 1 < len(profile):
        seg_end = profile[idx + 1].start
    elif duration is not None:
        seg_end = duration
    else:
        raise ValueError("a trailing ramp segment needs the run duration "
                         "to define its slope")
    span = seg_end - seg.start
    if span <= 0.0:
        return seg.target_rpm / sensor_gain
    w = min(max((t - seg.start) / span, 0.0), 1.0)
    target = seg.target_rpm / sensor_gain
    return prev_end + (target - prev_end) * w


def disturbance_at(profile: tuple[DisturbanceSegment, ...], t: float) -> tuple[float, float]:
    """Summed (output-channel, input-channel) disturbance voltages at time t."""
    d_out = 0.0
    d_in = 0.0
    for seg in profile:
        if t < seg.start - _TIME_EPS:
            continue
        if seg.kind == "pulse" and t >= seg.start + seg.width - _TIME_EPS:
            continue
        if seg.channel == "output":
            d_out += seg.amplitude
        else:
            d_in += seg.amplitude
    return d_out, d_in


#: trace.csv column order; RunRecord attributes use the lowercase names.
TRACE_COLUMNS = ("t", "r", "y", "e", "e_dot", "s", "u_pid", "u_smc",
                 "u_cmd", "u_applied", "V", "V_dot", "d_out")


@dataclass
class RunRecord:
    """Per-tick trace of a closed-loop run plus the metadata to reproduce it.

    ``u_cmd`` is the raw controller output, ``u_applied`` the actuator-clamped
    command actually held during the tick. ``v`` is the surface energy s^2/2
    and ``v_dot`` its chain-rule rate s*ds/dt with a backward-difference ds/dt
    (zero on the first row, where no difference exists).
    """

    t: np.ndarray
    r: np.ndarray
    y: np.ndarray
    e: np.ndarray
    e_dot: np.ndarray
    s: np.ndarray
    u_pid: np.ndarray
    u_smc: np.ndarray
    u_cmd: np.ndarray
    u_applied: np.ndarray
    v: np.ndarray
    v_dot: np.ndarray
    d_out: np.ndarray
    scenario: Scenario
    controller: ControllerSpec | OpenLoop
    plant: PlantModel
    final_plant_state: PlantState | None
    version: str = __version__

    def __len__(self) -> int:
        return len(self.t)

    def columns(self) -> dict[str, np.ndarray]:
        mapping = {"V": self.v, "V_dot": self.v_dot}
        return {name: mapping.get(name, getattr(self, name.lower()))
                for name in TRACE_COLUMNS}

    def write_csv(self, path) -> None:
        """Locale-independent trace with 9 significant digits per value."""
        cols = self.columns()
        with open(path, "w", newline="") as fh:
            fh.write(",".join(TRACE_COLUMNS) + "\n")
            for i in range(len(self)):
                fh.write(",".join(f"{cols[name][i]:.9g}" for name in TRACE_COLUMNS))
                fh.write("\n")


class SimulationDiverged(RuntimeError):
    """Raised when a run hits a non-finite state; carries the partial trace."""

    def __init__(self, message: str, record: RunRecord, row: int):
        super().__init__(message)
        self.record = record
        self.row = row


def run(scenario: Scenario) -> RunRecord:
    """Execute one closed-loop (or open-loop) run and return its trace.

    Each controller tick reads the measurement (plant output plus output
    disturbance plus optional uniform sensor noise), updates the controller,
    then holds the command while the plant sub-steps through the tick. The
    actuator clamp lives in the plant; ``u_applied`` logs its effect.
    """
    model = perturbed(scenario.plant, *scenario.perturbation)
    ctrl = resolve_controller(scenario.controller)
    n = scenario.ticks
    sub = scenario.substeps
    dt_c, dt_p = scenario.dt_ctrl, scenario.dt_plant

    cols = {name: np.zeros(n) for name in
            ("t", "r", "y", "e", "e_dot", "s", "u_pid", "u_smc",
             "u_cmd", "u_applied", "d_out")}
    rng = np.random.default_rng(scenario.seed) if scenario.noise_amplitude > 0 else None

    state = initial_state(model, dt_p)
    cstate = ControllerState()
    limits = (model.actuator_min, model.actuator_max)
    s_prev = 0.0

    def partial(k: int) -> RunRecord:
        return _assemble({name: arr[:k] for name, arr in cols.items()},
                         scenario, ctrl, model, state, dt_c)

    for k in range(n):
        t = k * dt_c
        r = reference_at(scenario.reference, t, model.sensor_gain, scenario.duration)
        d_out, _ = disturbance_at(scenario.disturbance, t)
        y = state.output + d_out
        if rng is not None:
            y += rng.uniform(-scenario.noise_amplitude, scenario.noise_amplitude)
        if not math.isfinite(y):
            raise SimulationDiverged(
                f"non-finite measurement at row {k} (t={t:g})", partial(k), k)

        if isinstance(ctrl, OpenLoop):
            u_cmd = ctrl.u
            e, e_dot, s, u_pid, u_smc = r - y, 0.0, 0.0, 0.0, 0.0
        else:
            u_cmd, trace, cstate = smcpid_update(
                ctrl.pid, ctrl.smc, cstate, r, y, dt_c,
                limits=limits, hard=ctrl.hard_switching)
            e, e_dot, s, u_pid, u_smc = trace
        # every logged quantity must stay finite, including the surface
        # energy and its backward-difference rate
        if not (math.isfinite(u_cmd) and math.isfinite(0.5 * s * s)
                and math.isfinite(s * (s - s_prev) / dt_c)):
            raise SimulationDiverged(
                f"non-finite command or surface energy at row {k} (t={t:g})",
                partial(k), k)
        s_prev = s

        u_applied = min(max(u_cmd, limits[0]), limits[1])
        for name, value in (("t", t), ("r", r), ("y", y), ("e", e),
                            ("e_dot", e_dot), ("s", s), ("u_pid", u_pid),
                            ("u_smc", u_smc), ("u_cmd", u_cmd),
                            ("u_applied", u_applied), ("d_out", d_out)):
            cols[name][k] = value

        try:
            for j in range(sub):
                _, d_in_sub = disturbance_at(scenario.disturbance, t + j * dt_p)
                state, _ = plant_step(model, state, u_cmd, 0.0, dt_p, d_in=d_in_sub)
        except ValueError as exc:
            raise SimulationDiverged(
                f"plant diverged during row {k} (t={t:g}): {exc}",
                partial(k + 1), k) from exc

    return _assemble(cols, scenario, ctrl, model, state, dt_c)


def _assemble(cols, scenario, ctrl, model, state, dt_c) -> RunRecord:
    s = cols["s"]
    v = 0.5 * s * s
    v_dot = np.zeros_like(s)
    if len(s) > 1:
        v_dot[1:] = s[1:] * np.diff(s) / dt_c
    return RunRecord(
        t=cols["t"], r=cols["r"], y=cols["y"], e=cols["e"], e_dot=cols["e_dot"],
        s=s, u_pid=cols["u_pid"], u_smc=cols["u_smc"], u_cmd=cols["u_cmd"],
        u_applied=cols["u_applied"], v=v, v_dot=v_dot, d_out=cols["d_out"],
        scenario=scenario, controller=ctrl, plant=model, final_plant_state=state,
    )


# Numeric fields a sweep may address, mapped to scenario transforms.
def _set_perturbation(scenario: Scenario, index: int, value: float) -> Scenario:
    p = list(scenario.perturbation)
    p[index] = value
    return replace(scenario, perturbation=tuple(p))


def _set_plant_field(scenario: Scenario, name: str, value: float) -> Scenario:
    return replace(scenario, plant=replace(scenario.plant, **{name: value}))


def _set_pid(scenario: Scenario, name: str, value: float) -> Scenario:
    ctrl = resolve_controller(scenario.controller)
    if isinstance(ctrl, OpenLoop):
        raise ValueError(f"cannot sweep {name!r} on an open-loop scenario")
    return replace(scenario, controller=replace(ctrl, pid=replace(ctrl.pid, **{name: value})))


def _set_smc(scenario: Scenario, name: str, value: float) -> Scenario:
    ctrl = resolve_controller(scenario.controller)
    if isinstance(ctrl, OpenLoop):
        raise ValueError(f"cannot sweep {name!r} on an open-loop scenario")
    return replace(scenario, controller=replace(ctrl, smc=replace(ctrl.smc, **{name: value})))


SWEEP_AXES = {
    "plant.dK": lambda sc, v: _set_perturbation(sc, 0, v),
    "plant.dTau": lambda sc, v: _set_perturbation(sc, 1, v),
    "plant.dL": lambda sc, v: _set_perturbation(sc, 2, v),
    **{f"plant.{name}": (lambda sc, v, _n=name: _set_plant_field(sc, _n, v))
       for name in ("gain", "time_constant", "dead_time",
                    "actuator_min", "actuator_max", "sensor_gain")},
    **{f"pid.{name}": (lambda sc, v, _n=name: _set_pid(sc, _n, v))
       for name in ("kp", "ki", "kd", "derivative_filter_tau")},
    **{f"smc.{name}": (lambda sc, v, _n=name: _set_smc(sc, _n, v))
       for name in ("lambda1", "lambda2", "eta", "phi")},
    "duration": lambda sc, v: replace(sc, duration=v),
    "noise_amplitude": lambda sc, v: replace(sc, noise_amplitude=v),
    "seed": lambda sc, v: replace(sc, seed=int(v)),
}


def scenario_with(base: Scenario, axis: str, value: float) -> Scenario:
    """Copy of ``base`` with one swept field replaced; validates the axis."""
    try:
        setter = SWEEP_AXES[axis]
    except KeyError:
        raise ValueError(f"unknown sweep axis {axis!r}; valid axes: "
                         f"{', '.join(sorted(SWEEP_AXES))}") from None
    return setter(base, value)


def sweep(base: Scenario, axis: str, values) -> list[RunRecord]:
    """One run per value along ``axis``, in input order.

    All scenarios are constructed and validated (including the perturbed
    plant) before the first run starts, so an invalid value rejects the whole
    sweep instead of leaving partial results.
    """
    scenarios = []
    for value in values:
        sc = scenario_with(base, axis, value)
        perturbed(sc.plant, *sc.perturbation)  # surface bad perturbations early
        scenarios.append(sc)
    return [run(sc) for sc in scenarios]
