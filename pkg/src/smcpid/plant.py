"""First-order-plus-dead-time servo plant with exact zero-order-hold integration.

The simulated drive is G(s) = K exp(-L s) / (1 + tau s): motor voltage in,
tachometer voltage out. Between integration steps the input is held constant,
so the recursion y+ = a*y + (1 - a)*K*u_d with a = exp(-dt/tau) solves the
first-order dynamics exactly. The transport delay L is realized as a delay
line of past (saturated) actuation samples; when L is not an integer multiple
of dt the delayed input is linearly interpolated between the two bracketing
samples, which is also the exact time average of the held input over the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class PlantModel:
    """FOPDT parameters plus actuator limits and the speed-sensor scaling.

    The defaults are the nominal servo model used throughout the benchmark
    suite: steady-state gain 0.946 V/V, time constant 0.4425 s, dead time
    32.5 ms, and a tachometer channel calibrated at 200 RPM per volt.
    """

    gain: float = 0.946
    time_constant: float = 0.4425
    dead_time: float = 0.0325
    actuator_min: float = -10.0
    actuator_max: float = 10.0
    sensor_gain: float = 200.0

    def __post_init__(self):
        for name in ("gain", "time_constant", "dead_time", "actuator_min",
                     "actuator_max", "sensor_gain"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"plant parameter {name} must be finite")
        if self.time_constant <= 0.0:
            raise ValueError(f"time_constant must be positive, got {self.time_constant}")
        if self.dead_time < 0.0:
            raise ValueError(f"dead_time must be nonnegative, got {self.dead_time}")
        if self.actuator_min >= self.actuator_max:
            raise ValueError("actuator_min must be below actuator_max")
        if self.sensor_gain <= 0.0:
            raise ValueError("sensor_gain must be positive")

    @property
    def b(self) -> float:
        """High-frequency gain K/tau of the delay-free plant.

        This is the input gain assumed by the stability monitor when it maps
        the loop onto second-order error dynamics.
        """
        return self.gain / self.time_constant


NOMINAL = PlantModel()


@dataclass(frozen=True)
class PlantState:
    """Plant output plus the delay line of past actuation samples.

    ``delay_line[0]`` is the most recently applied sample; the line length is
    fixed at construction for a given integration step ``dt``.
    """

    output: float
    delay_line: tuple[float, ...]
    time: float
    dt: float


def _delay_split(dead_time: float, dt: float) -> tuple[int, float]:
    # Integer/fractional split of L/dt, with a tolerance so that ratios such
    # as 0.0325/0.0005 resolve to exact integers despite float rounding.
    d = dead_time / dt
    m = int(math.floor(d + 1e-9))
    frac = d - m
    if frac < 1e-9:
        frac = 0.0
    return m, frac


def delay_line_length(dead_time: float, dt: float) -> int:
    """Number of stored samples needed to evaluate the delayed input."""
    m, frac = _delay_split(dead_time, dt)
    return m + 2 if frac > 0.0 else m + 1


def initial_state(model: PlantModel, dt: float) -> PlantState:
    """Motor at rest: zero output and a zero-filled delay line sized for dt."""
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be a positive finite number, got {dt}")
    return PlantState(
        output=0.0,
        delay_line=(0.0,) * delay_line_length(model.dead_time, dt),
        time=0.0,
        dt=dt,
    )


def plant_step(model: PlantModel, state: PlantState, u: float, d_out: float,
               dt: float, d_in: float = 0.0) -> tuple[PlantState, float]:
    """Advance the plant by one integration step of length dt.

    The command ``u`` is clamped to the actuator range and pushed into the
    delay line; ``d_in`` models a disturbance entering after the actuator
    (it is added post-clamp and experiences the same transport delay).
    Returns the new state and the measured sample, i.e. the plant output
    with the additive sensor-side disturbance ``d_out`` on top. The internal
    state never contains ``d_out``.
    """
    if not (math.isfinite(u) and math.isfinite(d_out) and math.isfinite(d_in)):
        raise ValueError(f"non-finite plant input at t={state.time:g}: "
                         f"u={u}, d_out={d_out}, d_in={d_in}")
    if dt != state.dt:
        raise ValueError(f"dt={dt} does not match the dt={state.dt} "
                         "the delay line was sized for")
    expected = delay_line_length(model.dead_time, dt)
    if len(state.delay_line) != expected:
        raise ValueError(f"delay line holds {len(state.delay_line)} samples "
                         f"but dead_time={model.dead_time} at dt={dt} needs {expected}")

    u_clamped = min(max(u, model.actuator_min), model.actuator_max)
    line = (u_clamped + d_in,) + state.delay_line[:-1]

    m, frac = _delay_split(model.dead_time, dt)
    u_delayed = (1.0 - frac) * line[m]
    if frac > 0.0:
        u_delayed += frac * line[m + 1]

    a = math.exp(-dt / model.time_constant)
    y = a * state.output + (1.0 - a) * model.gain * u_delayed
    if not math.isfinite(y):
        raise ValueError(f"plant output became non-finite at t={state.time + dt:g}")
    return PlantState(y, line, state.time + dt, dt), y + d_out


def rpm_to_volts(speed_rpm: float, sensor_gain: float = 200.0) -> float:
    """Convert a shaft speed to the tachometer voltage seen by the loop."""
    if sensor_gain <= 0.0:
        raise ValueError("sensor_gain must be positive")
    if not math.isfinite(speed_rpm):
        raise ValueError(f"non-finite speed: {speed_rpm}")
    return speed_rpm / sensor_gain


def volts_to_rpm(volts: float, sensor_gain: float = 200.0) -> float:
    """Inverse of :func:`rpm_to_volts`."""
    if sensor_gain <= 0.0:
        raise ValueError("sensor_gain must be positive")
    if not math.isfinite(volts):
        raise ValueError(f"non-finite voltage: {volts}")
    return volts * sensor_gain


def perturbed(model: PlantModel, d_gain: float = 0.0, d_time_constant: float = 0.0,
              d_dead_time: float = 0.0) -> PlantModel:
    """Copy of ``model`` with fractional perturbations applied to K, tau, L.

    ``perturbed(m, 0.2, 0, 0)`` raises the gain by 20 percent. Perturbations
    that drive the time constant to zero or below are rejected.
    """
    return replace(
        model,
        gain=model.gain * (1.0 + d_gain),
        time_constant=model.time_constant * (1.0 + d_time_constant),
        dead_time=model.dead_time * (1.0 + d_dead_time),
    )
