"""Discrete PID, the sliding-mode switching term, and their sum.

The combined control law is u = u_pid + u_smc with

    u_pid = Kp*e + Ki*integral(e) + Kd*de/dt
    u_smc = -eta * sat(s / phi),      s = lambda1*e + lambda2*de/dt

where e is the speed error in sensor volts. All updates are pure functions
over an explicit :class:`ControllerState`, so controllers can run on any
number of loops concurrently and replaying the same inputs reproduces the
same outputs bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class PidGains:
    """PID gains; ``derivative_filter_tau`` of 0 disables derivative filtering."""

    kp: float
    ki: float
    kd: float
    derivative_filter_tau: float = 0.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0.0:
            raise ValueError("PID gains must be nonnegative")
        if self.derivative_filter_tau < 0.0:
            raise ValueError("derivative_filter_tau must be nonnegative")


@dataclass(frozen=True)
class SmcGains:
    """Sliding-surface weights, switching amplitude and boundary-layer width.

    ``eta`` may be zero, which disables the switching term and reduces the
    combined controller to the plain PID (used by degeneracy checks and
    sweeps); the surface weights and the layer width must stay positive.
    """

    lambda1: float = 1.0
    lambda2: float = 0.05
    eta: float = 1.0
    phi: float = 0.05

    def __post_init__(self):
        if self.lambda1 <= 0.0 or self.lambda2 <= 0.0:
            raise ValueError("surface weights lambda1, lambda2 must be positive")
        if self.eta < 0.0:
            raise ValueError("eta must be nonnegative")
        if self.phi <= 0.0:
            raise ValueError("boundary-layer width phi must be positive")


PID_PRESETS: dict[str, PidGains] = {
    "smcpid": PidGains(25.1, 30.5, 0.293),
    "kuhn": PidGains(1.057, 3.125, 0.08016),
    "naive": PidGains(1.0, 1.0, 1.0),
}

SMC_PRESET = SmcGains(lambda1=1.0, lambda2=0.05, eta=1.0, phi=0.05)

# Open-loop-safe default matching the nominal plant's actuator range.
DEFAULT_LIMITS = (-10.0, 10.0)


@dataclass(frozen=True)
class ControllerState:
    """Integrator, previous error and previous (filtered) error derivative.

    A fresh state is marked uninitialized so that the first update returns a
    zero derivative instead of differencing against fabricated history.
    """

    integral: float = 0.0
    prev_error: float = 0.0
    prev_error_dot: float = 0.0
    initialized: bool = False


class ControlTrace(NamedTuple):
    """Per-update components logged for analysis: error, its derivative, the
    surface value and the two control contributions."""

    e: float
    e_dot: float
    s: float
    u_pid: float
    u_smc: float


def error_derivative(state: ControllerState, error: float, dt: float,
                     filter_tau: float = 0.0) -> float:
    """Backward-difference error derivative, optionally low-pass filtered.

    Returns 0 on an uninitialized state (no history to difference against).
    With ``filter_tau`` > 0 the raw difference passes through a first-order
    lag with that time constant, discretized with the same backward rule.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not state.initialized:
        return 0.0
    raw = (error - state.prev_error) / dt
    if filter_tau > 0.0:
        alpha = filter_tau / (filter_tau + dt)
        return alpha * state.prev_error_dot + (1.0 - alpha) * raw
    return raw


def pid_update(gains: PidGains, state: ControllerState, error: float, dt: float,
               limits: tuple[float, float] = DEFAULT_LIMITS,
               ) -> tuple[float, ControllerState]:
    """One PID update: rectangular integral with anti-windup, then the sum.

    The integrator is clamped so that Ki*integral stays inside ``limits``
    (the actuator range); with saturating actuation and a persistently
    unachievable reference this keeps the stored integral recoverable.
    """
    if not math.isfinite(error):
        raise ValueError(f"non-finite error: {error}")
    e_dot = error_derivative(state, error, dt, gains.derivative_filter_tau)
    integral = state.integral + error * dt
    if gains.ki > 0.0:
        integral = min(max(integral, limits[0] / gains.ki), limits[1] / gains.ki)
    u_pid = gains.kp * error + gains.ki * integral + gains.kd * e_dot
    return u_pid, ControllerState(integral, error, e_dot, True)


def sliding_surface(gains: SmcGains, error: float, error_dot: float) -> float:
    """Surface value s = lambda1*e + lambda2*de/dt; s = 0 is the target dynamics."""
    return gains.lambda1 * error + gains.lambda2 * error_dot


def sat(x: float) -> float:
    """Unit saturation: identity on [-1, 1], clamped outside. Odd, 1-Lipschitz."""
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return float(x)


def smc_update(gains: SmcGains, s: float, hard: bool = False) -> float:
    """Switching term -eta*sat(s/phi); with ``hard`` the relay -eta*sign(s).

    The boundary layer makes the term continuous in s, which is what keeps
    the command free of relay chattering near the surface; the hard variant
    exists so that the difference is measurable.
    """
    if hard:
        return -gains.eta * float((s > 0.0) - (s < 0.0))
    return -gains.eta * sat(s / gains.phi)


def smcpid_update(pid: PidGains, smc: SmcGains, state: ControllerState,
                  reference: float, measurement: float, dt: float,
                  limits: tuple[float, float] = DEFAULT_LIMITS,
                  hard: bool = False,
                  ) -> tuple[float, ControlTrace, ControllerState]:
    """Combined update u = u_pid + u_smc on the error e = reference - measurement.

    Both terms see the same backward-difference derivative, so the returned
    command decomposes exactly into the PID and switching contributions in
    the trace. Actuator clamping is the plant's job; the command is returned
    unclamped.
    """
    if not (math.isfinite(reference) and math.isfinite(measurement)):
        raise ValueError(f"non-finite controller input: r={reference}, y={measurement}")
    e = reference - measurement
    u_pid, new_state = pid_update(pid, state, e, dt, limits)
    e_dot = new_state.prev_error_dot
    s = sliding_surface(smc, e, e_dot)
    u_smc = smc_update(smc, s, hard)
    return u_pid + u_smc, ControlTrace(e, e_dot, s, u_pid, u_smc), new_state
