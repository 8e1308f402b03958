"""Shared helpers: synthetic run records for metrics/stability unit tests."""

from __future__ import annotations

import numpy as np

from smcpid import (
    NOMINAL,
    PID_PRESETS,
    SMC_PRESET,
    ControllerSpec,
    RunRecord,
    Scenario,
)

DEFAULT_CTRL = ControllerSpec(pid=PID_PRESETS["smcpid"], smc=SMC_PRESET, label="smcpid")


def make_record(*, s=None, u_smc=None, r=None, y=None, e=None, u_applied=None,
                dt=0.01, controller=DEFAULT_CTRL, plant=NOMINAL) -> RunRecord:
    """Build a RunRecord directly from arrays, zero-filling whatever is absent.

    ``e`` defaults to r - y when both are given, matching real runs.
    """
    given = [np.asarray(a, dtype=float)
             for a in (s, u_smc, r, y, e, u_applied) if a is not None]
    if not given:
        raise ValueError("make_record needs at least one series")
    n = len(given[0])
    if any(len(a) != n for a in given):
        raise ValueError("all series must share one length")

    def arr(x):
        return np.zeros(n) if x is None else np.asarray(x, dtype=float)

    r_arr, y_arr = arr(r), arr(y)
    e_arr = (r_arr - y_arr) if e is None and (r is not None or y is not None) else arr(e)
    s_arr, u_smc_arr, u_app_arr = arr(s), arr(u_smc), arr(u_applied)
    t = np.arange(n) * dt
    v = 0.5 * s_arr * s_arr
    v_dot = np.zeros(n)
    if n > 1:
        v_dot[1:] = s_arr[1:] * np.diff(s_arr) / dt

    scenario = Scenario(reference=(), duration=n * dt, dt_ctrl=dt, dt_plant=dt,
                        controller=controller, plant=plant)
    return RunRecord(
        t=t, r=r_arr, y=y_arr, e=e_arr, e_dot=np.zeros(n), s=s_arr,
        u_pid=np.zeros(n), u_smc=u_smc_arr, u_cmd=u_app_arr,
        u_applied=u_app_arr, v=v, v_dot=v_dot, d_out=np.zeros(n),
        scenario=scenario, controller=controller, plant=plant,
        final_plant_state=None,
    )
