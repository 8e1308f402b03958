"""Metric tests on synthetic traces with analytic expectations."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import make_record
from smcpid import compare, run, run_metrics, step_metrics, step_scenario
from smcpid.metrics import RANKED_METRICS


def first_order_trace(target=2.0, tau=0.5, duration=5.0, dt=0.01):
    t = np.arange(int(round(duration / dt))) * dt
    y = target * (1.0 - np.exp(-t / tau))
    r = np.full_like(t, target)
    return make_record(r=r, y=y, u_applied=np.zeros_like(t), dt=dt)


class TestStepMetrics:
    def test_perfect_tracking(self):
        n = 200
        rec = make_record(r=[2.0] * n, y=[2.0] * n)
        m = step_metrics(rec)
        assert m.overshoot_pct == 0.0
        assert m.settling_time == 0.0
        assert m.settled
        assert m.steady_state_error_volts == 0.0

    def test_overshoot_definition(self):
        y = np.concatenate([np.linspace(0, 2.1, 50), np.full(150, 2.0)])
        rec = make_record(r=[2.0] * 200, y=y)
        assert step_metrics(rec).overshoot_pct == pytest.approx(5.0)

    def test_settling_time_first_order_oracle(self):
        # |y - 2| < 0.02 * 2 once t > -tau ln(0.02) = 1.956 s
        m = step_metrics(first_order_trace(tau=0.5))
        assert m.settling_time == pytest.approx(-0.5 * math.log(0.02), abs=0.0101)
        assert m.settled

    def test_band_is_configurable(self):
        m = step_metrics(first_order_trace(tau=0.5), band=0.05)
        assert m.settling_time == pytest.approx(-0.5 * math.log(0.05), abs=0.0101)

    def test_rise_time_first_order_oracle(self):
        # 10 to 90 percent crossing gap is tau ln 9
        m = step_metrics(first_order_trace(tau=0.5))
        assert m.rise_time_10_90 == pytest.approx(0.5 * math.log(9.0), abs=0.0101)

    def test_never_settling_flagged(self):
        t = np.arange(300) * 0.01
        y = 2.0 + 0.5 * np.sin(5 * t)
        rec = make_record(r=[2.0] * 300, y=y)
        m = step_metrics(rec)
        assert not m.settled
        assert math.isinf(m.settling_time)

    def test_zero_step_overshoot_flagged_not_rejected(self):
        rec = make_record(r=[0.0] * 100, y=np.zeros(100))
        m = step_metrics(rec)
        assert math.isnan(m.overshoot_pct)
        assert math.isnan(m.steady_state_error_pct)  # setpoint is zero

    def test_rejects_multi_step_profiles(self):
        r = [2.0] * 50 + [1.0] * 50
        with pytest.raises(ValueError):
            step_metrics(make_record(r=r, y=np.zeros(100)))

    def test_rejects_wrong_step_time(self):
        rec = make_record(r=[2.0] * 100, y=np.zeros(100))
        with pytest.raises(ValueError):
            step_metrics(rec, step_time=1.0)

    def test_integral_indices_rectangular_rule(self):
        n, dt = 100, 0.01
        rec = make_record(r=[2.0] * n, y=[1.0] * n, dt=dt)  # constant e = 1
        m = run_metrics(rec)
        assert m.iae == pytest.approx(n * dt)
        assert m.ise == pytest.approx(n * dt)
        assert m.itae == pytest.approx(sum(k * dt for k in range(n)) * dt)


class TestMultiStepMetrics:
    def segmented_trace(self):
        dt = 0.01
        plan = [(2.0, 4.0), (1.0, 4.0), (2.5, 4.0)]
        t_all, r_all, y_all = [], [], []
        prev = 0.0
        t0 = 0.0
        for target, span in plan:
            t = np.arange(int(round(span / dt))) * dt
            y = target + (prev - target) * np.exp(-t / 0.3)
            r_all.append(np.full_like(t, target))
            y_all.append(y)
            t_all.append(t + t0)
            prev = target
            t0 += span
        return make_record(r=np.concatenate(r_all), y=np.concatenate(y_all), dt=dt)

    def test_settling_sums_over_segments(self):
        m = run_metrics(self.segmented_trace())
        # each segment settles at 0.3 ln 50 after its step
        assert m.settling_time == pytest.approx(3 * 0.3 * math.log(50.0), abs=0.0301)
        assert m.settled

    def test_overshoot_is_worst_segment(self):
        m = run_metrics(self.segmented_trace())
        assert m.overshoot_pct == 0.0  # pure exponentials never overshoot


class TestInvariances:
    def test_scale_covariance(self):
        base = first_order_trace()
        c = 3.7
        scaled = make_record(r=base.r * c, y=base.y * c,
                             u_applied=base.u_applied, dt=0.01)
        mb, ms = run_metrics(base), run_metrics(scaled)
        assert ms.overshoot_pct == pytest.approx(mb.overshoot_pct)
        assert ms.settling_time == pytest.approx(mb.settling_time)
        assert ms.steady_state_error_volts == pytest.approx(
            c * mb.steady_state_error_volts, rel=1e-9)
        assert ms.iae == pytest.approx(c * mb.iae, rel=1e-9)

    def test_time_shift_equivariance(self):
        dt, delay_ticks = 0.01, 150
        base = first_order_trace(duration=3.0)
        r = np.concatenate([np.zeros(delay_ticks), base.r])
        y = np.concatenate([np.zeros(delay_ticks), base.y])
        shifted = make_record(r=r, y=y, dt=dt)
        mb, ms = run_metrics(base), run_metrics(shifted)
        # all step-relative quantities are measured from the (shifted) step
        assert ms.settling_time == pytest.approx(mb.settling_time, abs=1e-9)
        assert ms.iae == pytest.approx(mb.iae, rel=1e-9)
        assert ms.itae == pytest.approx(mb.itae, rel=1e-9)
        # shifting the origin instead grows itae by exactly delay * iae
        delay = delay_ticks * dt
        itae_from_origin = float(np.sum(shifted.t * np.abs(shifted.e)) * dt)
        assert itae_from_origin == pytest.approx(ms.itae + delay * ms.iae, rel=1e-9)

    def test_monotone_approach_has_zero_overshoot(self):
        rng = np.random.default_rng(3)
        y = np.minimum.accumulate(np.full(200, 2.0) - rng.uniform(0, 2, 200))[::-1]
        rec = make_record(r=[2.0] * 200, y=np.clip(y, 0, 2.0))
        assert run_metrics(rec).overshoot_pct == 0.0

    def test_control_tv_counts_applied_command(self):
        u = np.array([0.0, 1.0, -1.0, -1.0, 2.0])
        rec = make_record(r=[1.0] * 5, y=[0.0] * 5, u_applied=u)
        assert run_metrics(rec).control_tv == pytest.approx(6.0)


class TestCompare:
    def test_single_run_all_ranks_one(self):
        rec = run(step_scenario("kuhn", duration=1.0))
        table = compare([("kuhn", rec)])
        assert all(table.ranks[m] == [1] for m in RANKED_METRICS)

    def test_identical_runs_tie(self):
        sc = step_scenario("kuhn", duration=1.0)
        table = compare([("a", run(sc)), ("b", run(sc))])
        assert table.metrics[0] == table.metrics[1]
        assert all(table.ranks[m] == [1, 1] for m in RANKED_METRICS)

    def test_duplicate_labels_rejected(self):
        rec = run(step_scenario("kuhn", duration=1.0))
        with pytest.raises(ValueError, match="duplicate"):
            compare([("x", rec), ("x", rec)])

    def test_mismatched_scenarios_rejected(self):
        a = run(step_scenario("kuhn", duration=1.0))
        b = run(step_scenario("kuhn", duration=2.0))
        with pytest.raises(ValueError, match="different scenarios"):
            compare([("a", a), ("b", b)])

    def test_controllers_may_differ(self):
        sc = step_scenario("kuhn", duration=1.0)
        table = compare([("kuhn", run(sc)),
                         ("naive", run(step_scenario("naive", duration=1.0)))])
        assert table.labels == ["kuhn", "naive"]


@pytest.mark.parametrize("pid_preset,eta", [("smcpid", 1.0), ("kuhn", 1.0)])
def test_relay_switching_never_reduces_command_variation(pid_preset, eta):
    """Replacing the boundary-layer saturation with a hard relay is supposed
    to increase (or at worst match) the total variation of the applied
    command on a given scenario.

    Measured behavior contradicts this on the nominal step scenario for both
    gain sets, in the smcpid case because the loop limit-cycles either way;
    kept as an executable record. See README, "Acceptance status".
    """
    from smcpid import PID_PRESETS, SMC_PRESET, ControllerSpec
    from dataclasses import replace

    smc = replace(SMC_PRESET, eta=eta)
    sat_run = run(step_scenario(
        ControllerSpec(PID_PRESETS[pid_preset], smc, "sat"), duration=5.0))
    relay_run = run(step_scenario(
        ControllerSpec(PID_PRESETS[pid_preset], smc, "relay", hard_switching=True),
        duration=5.0))
    tv_sat = run_metrics(sat_run).control_tv
    tv_relay = run_metrics(relay_run).control_tv
    assert tv_relay >= tv_sat, (
        f"relay TV {tv_relay:.2f} fell below boundary-layer TV {tv_sat:.2f}")
