"""Numerical check of the reaching argument on recorded runs.

The monitor works on the logged surface series s_k. With the surface energy
V = s^2/2 and its rate V' = s*s', strict decrease of V outside the boundary
layer is what drives the error onto the surface. Rearranging the closed-loop
surface dynamics s' = Delta - lambda2*b*eta*sat(s/phi) lets the lumped term
Delta (plant nonlinearity, PID feedback, disturbances, anything not the
switching term) be reconstructed from the logs alone:

    Delta_k = s'_k - lambda2 * b * u_smc_k

Its empirical bound delta feeds the gain condition eta > delta/(lambda2*b):
the switching amplitude needed to dominate everything else. The monitor
measures whether that held on a given run; it does not prove anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .controllers import SmcGains
from .sim import ControllerSpec, RunRecord


@dataclass(frozen=True)
class StabilityReport:
    """Summary of the reaching-condition checks over one run.

    ``decrease_violations`` counts ticks outside the boundary layer where the
    surface energy failed to decrease strictly; ``epsilon_est`` is the
    smallest observed decrease margin -V'/|s| over those ticks (NaN when the
    run never leaves the layer). ``eta_min`` is the switching amplitude the
    reconstructed disturbance bound would require.
    """

    delta_bound_est: float
    eta_min: float
    gain_condition_met: bool
    decrease_violations: int
    epsilon_est: float
    b_used: float
    eta: float
    skipped_ticks: int


class GainCondition(NamedTuple):
    eta_min: float
    gain_condition_met: bool


class DecreaseCheck(NamedTuple):
    decrease_violations: int
    epsilon_est: float
    qualifying_steps: int


def lyapunov_v(s):
    """Surface energy V = s^2/2 (scalar or array)."""
    return 0.5 * np.square(s) if isinstance(s, np.ndarray) else 0.5 * s * s


def _require_rows(record: RunRecord, n: int) -> None:
    if len(record) < n:
        raise ValueError(f"run has {len(record)} controller steps, need at least {n}")


def s_dot_series(record: RunRecord) -> np.ndarray:
    """Backward differences of the logged surface series at the controller
    period; element k corresponds to tick k+1 (the first tick has no
    difference and is omitted)."""
    _require_rows(record, 2)
    return np.diff(record.s) / record.scenario.dt_ctrl


def _smc_gains(record: RunRecord) -> SmcGains:
    if not isinstance(record.controller, ControllerSpec):
        raise ValueError("run has no sliding-mode controller attached; "
                         "the surface reconstruction needs its gains")
    return record.controller.smc


def delta_series(record: RunRecord, b: float) -> np.ndarray:
    """Reconstructed lumped-disturbance series Delta_k, aligned with
    :func:`s_dot_series` (one entry per tick from the second onward).

    Uses the logged switching command, so Delta_k = s'_k - lambda2*b*u_smc_k
    holds exactly for whatever variant (saturated or relay) actually ran.
    """
    if b <= 0.0 or not math.isfinite(b):
        raise ValueError(f"model input gain b must be positive, got {b}")
    lam2 = _smc_gains(record).lambda2
    return s_dot_series(record) - lam2 * b * record.u_smc[1:]


def check_gain_condition(delta_bound: float, smc: SmcGains, b: float) -> GainCondition:
    """Required switching amplitude eta_min = delta/(lambda2*b) and whether
    the configured eta strictly exceeds it."""
    if b <= 0.0 or not math.isfinite(b):
        raise ValueError(f"model input gain b must be positive, got {b}")
    if delta_bound < 0.0:
        raise ValueError("delta_bound is a magnitude and cannot be negative")
    eta_min = delta_bound / (smc.lambda2 * b)
    return GainCondition(eta_min, smc.eta > eta_min)


def check_decrease(record: RunRecord, phi: float | None = None,
                   skip: int = 0) -> DecreaseCheck:
    """Count ticks outside the boundary layer (|s| > phi) where V' = s*s'
    failed to be strictly negative, and the smallest decrease margin.

    ``skip`` drops that many leading entries of the difference series before
    counting (used by the report to exclude the derivative-initialization
    transient); the default checks every defined tick.
    """
    if phi is None:
        phi = _smc_gains(record).phi
    s_dot = s_dot_series(record)[skip:]
    s = record.s[1 + skip:]
    v_dot = s * s_dot
    qualifying = np.abs(s) > phi
    violations = int(np.count_nonzero(qualifying & (v_dot >= 0.0)))
    if qualifying.any():
        epsilon = float(np.min(-v_dot[qualifying] / np.abs(s[qualifying])))
    else:
        epsilon = math.nan
    return DecreaseCheck(violations, epsilon, int(np.count_nonzero(qualifying)))


def stability_report(record: RunRecord, b: float | None = None,
                     skip: int = 1) -> StabilityReport:
    """Full monitor pass over a run.

    ``b`` defaults to K/tau of the scenario's nominal plant (model mismatch
    from perturbations is part of what the reconstructed Delta absorbs). The
    first ``skip`` difference entries are excluded from both the disturbance
    bound and the violation count: the very first difference spans the tick
    where the derivative history initializes.
    """
    if b is None:
        b = record.scenario.plant.b
    smc = _smc_gains(record)
    deltas = delta_series(record, b)[skip:]
    delta_bound = float(np.max(np.abs(deltas))) if len(deltas) else 0.0
    gain = check_gain_condition(delta_bound, smc, b)
    decrease = check_decrease(record, smc.phi, skip=skip)
    return StabilityReport(
        delta_bound_est=delta_bound,
        eta_min=gain.eta_min,
        gain_condition_met=gain.gain_condition_met,
        decrease_violations=decrease.decrease_violations,
        epsilon_est=decrease.epsilon_est,
        b_used=b,
        eta=smc.eta,
        skipped_ticks=skip,
    )


def format_report(report: StabilityReport) -> str:
    """Plain-text rendering used by the command-line outputs."""
    lines = [
        f"delta_bound_est = {report.delta_bound_est:.9g}",
        f"b_used = {report.b_used:.9g}",
        f"eta = {report.eta:.9g}",
        f"eta_min = {report.eta_min:.9g}",
        f"gain_condition_met = {str(report.gain_condition_met).lower()}",
        f"decrease_violations = {report.decrease_violations}",
        f"epsilon_est = {report.epsilon_est:.9g}",
        f"skipped_ticks = {report.skipped_ticks}",
    ]
    return "\n".join(lines) + "\n"
