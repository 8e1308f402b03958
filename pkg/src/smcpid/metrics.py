"""Step-response quality metrics and controller comparison tables.

Overshoot and the settling band are measured relative to the reference step
size rather than the absolute setpoint, so segments starting from a nonzero
speed are treated the same as a step from rest. Integral indices use the
rectangular rule on the controller grid, matching the integrator inside the
loop. The chattering index is the total variation of the applied command.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .sim import RunRecord


@dataclass(frozen=True)
class MetricSet:
    """Scalar quality measures of one run.

    ``settling_time`` is infinite (and ``settled`` False) when the output
    never stays inside the band; ``overshoot_pct`` is NaN when the reference
    never actually steps, where overshoot is undefined.
    """

    overshoot_pct: float
    settling_time: float
    settled: bool
    rise_time_10_90: float
    steady_state_error_volts: float
    steady_state_error_pct: float
    iae: float
    ise: float
    itae: float
    control_tv: float


#: metrics that get a rank column in comparison tables; lower is better
RANKED_METRICS = ("overshoot_pct", "settling_time", "rise_time_10_90",
                  "steady_state_error_volts", "iae", "ise", "itae", "control_tv")


def _transitions(r: np.ndarray) -> list[int]:
    """Row indices where the reference changes; a nonzero initial reference
    counts as a step from rest at row 0."""
    idx = [0] if r[0] != 0.0 else []
    idx += [int(k) for k in np.flatnonzero(np.diff(r)) + 1]
    return idx


def _segment_settling(t_seg, y_seg, r_final, half_band, dt) -> tuple[float, bool]:
    outside = np.abs(y_seg - r_final) > half_band
    if not outside.any():
        return 0.0, True
    last_out = int(np.flatnonzero(outside)[-1])
    if last_out == len(y_seg) - 1:
        return math.inf, False
    return t_seg[last_out] + dt - t_seg[0], True


def _rise_time(t_seg, y_seg, r_init, step) -> float:
    progress = (y_seg - r_init) / step
    above10 = np.flatnonzero(progress >= 0.1)
    if len(above10) == 0:
        return math.inf
    above90 = np.flatnonzero(progress[above10[0]:] >= 0.9)
    if len(above90) == 0:
        return math.inf
    return t_seg[above10[0] + above90[0]] - t_seg[above10[0]]


def run_metrics(record: RunRecord, band: float = 0.02) -> MetricSet:
    """Metrics over a full run, handling multi-step reference profiles.

    Each reference change opens a segment; overshoot is the worst segment's
    excursion past its target (in the direction of its step), settling time
    is the sum of per-segment settling times. A segment whose output is still
    outside the band when the segment ends counts as not settled.
    """
    if len(record) < 2:
        raise ValueError("run too short for metrics (need at least 2 rows)")
    if band <= 0.0:
        raise ValueError("band must be positive")
    t, r, y, e = record.t, record.r, record.y, record.e
    dt = record.scenario.dt_ctrl
    starts = _transitions(r)

    overshoot = math.nan
    settling_total = 0.0
    settled_all = True
    rise = math.inf
    have_rise = False
    for i, k0 in enumerate(starts):
        k1 = starts[i + 1] if i + 1 < len(starts) else len(r)
        r_final = r[k0]
        r_init = r[k0 - 1] if k0 > 0 else 0.0
        step = r_final - r_init
        if step == 0.0:
            continue
        seg_t, seg_y = t[k0:k1], y[k0:k1]
        exceed = np.max((seg_y - r_final) * math.copysign(1.0, step)) / abs(step)
        seg_overshoot = max(0.0, exceed) * 100.0
        overshoot = seg_overshoot if math.isnan(overshoot) else max(overshoot, seg_overshoot)
        seg_settling, seg_settled = _segment_settling(
            seg_t, seg_y, r_final, band * abs(step), dt)
        settling_total += seg_settling
        settled_all = settled_all and seg_settled
        if not have_rise:
            rise = _rise_time(seg_t, seg_y, r_init, step)
            have_rise = True

    t0 = t[starts[0]] if starts else t[0]
    mask = t >= t0 - 1e-12
    abs_e = np.abs(e[mask])
    iae = float(np.sum(abs_e) * dt)
    ise = float(np.sum(e[mask] ** 2) * dt)
    itae = float(np.sum((t[mask] - t0) * abs_e) * dt)

    n_tail = max(1, len(record) // 10)
    sse = float(np.mean(np.abs(e[-n_tail:])))
    r_last = r[-1]
    sse_pct = sse / abs(r_last) * 100.0 if r_last != 0.0 else math.nan

    tv = float(np.sum(np.abs(np.diff(record.u_applied))))
    return MetricSet(
        overshoot_pct=overshoot,
        settling_time=settling_total if settled_all else math.inf,
        settled=settled_all,
        rise_time_10_90=rise,
        steady_state_error_volts=sse,
        steady_state_error_pct=sse_pct,
        iae=iae,
        ise=ise,
        itae=itae,
        control_tv=tv,
    )


def step_metrics(record: RunRecord, step_time: float = 0.0,
                 band: float = 0.02) -> MetricSet:
    """Metrics for a run whose reference is a single step at ``step_time``.

    Rejects runs with a different profile shape; a zero-size step yields NaN
    overshoot (flagged, not an error).
    """
    starts = _transitions(record.r)
    if len(starts) > 1:
        raise ValueError(f"reference changes {len(starts)} times; "
                         "step_metrics needs a single step")
    if starts:
        actual = record.t[starts[0]]
        if abs(actual - step_time) > record.scenario.dt_ctrl / 2:
            raise ValueError(f"reference steps at t={actual:g}, not at "
                             f"step_time={step_time:g}")
    return run_metrics(record, band)


@dataclass
class ComparisonTable:
    """Per-controller metric rows plus rank columns (rank 1 = best)."""

    labels: list[str]
    metrics: list[MetricSet]
    ranks: dict[str, list[int]]

    def row(self, label: str) -> MetricSet:
        return self.metrics[self.labels.index(label)]

    def rank_of(self, label: str, metric: str) -> int:
        return self.ranks[metric][self.labels.index(label)]

    def write_csv(self, path) -> None:
        metric_names = [f.name for f in fields(MetricSet)]
        header = ["label"] + metric_names + [f"rank_{m}" for m in RANKED_METRICS]
        with open(path, "w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for i, label in enumerate(self.labels):
                row = [label]
                for name in metric_names:
                    value = getattr(self.metrics[i], name)
                    row.append(str(value).lower() if isinstance(value, bool)
                               else f"{value:.9g}")
                row += [str(self.ranks[m][i]) for m in RANKED_METRICS]
                fh.write(",".join(row) + "\n")

    def format_text(self) -> str:
        cols = ("overshoot_pct", "settling_time", "steady_state_error_pct",
                "iae", "control_tv")
        widths = {c: max(len(c), 12) for c in cols}
        out = ["controller".ljust(12) + "".join(c.rjust(widths[c] + 2) for c in cols)]
        for i, label in enumerate(self.labels):
            row = label.ljust(12)
            for c in cols:
                value = getattr(self.metrics[i], c)
                rank = f"({self.ranks[c][i]})" if c in RANKED_METRICS else ""
                row += f"{value:.4g}{rank}".rjust(widths[c] + 2)
            out.append(row)
        return "\n".join(out) + "\n"


def _rank(values: list[float]) -> list[int]:
    # NaN (undefined) ranks last; ties share the better rank.
    effective = [math.inf if math.isnan(v) else v for v in values]
    return [1 + sum(1 for w in effective if w < v) for v in effective]


def compare(labeled_runs: list[tuple[str, RunRecord]],
            band: float = 0.02) -> ComparisonTable:
    """Metric table over runs of the same scenario under different controllers.

    Labels must be unique and every run must share the scenario apart from
    its controller; anything else would make the ranks meaningless.
    """
    if not labeled_runs:
        raise ValueError("nothing to compare")
    labels = [label for label, _ in labeled_runs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate labels in comparison: {labels}")
    normalized = [replace(rec.scenario, controller="smcpid")
                  for _, rec in labeled_runs]
    if any(sc != normalized[0] for sc in normalized[1:]):
        raise ValueError("runs come from different scenarios; "
                         "compare only controllers on one scenario")
    rows = [run_metrics(rec, band) for _, rec in labeled_runs]
    ranks = {name: _rank([getattr(m, name) for m in rows]) for name in RANKED_METRICS}
    return ComparisonTable(labels, rows, ranks)
