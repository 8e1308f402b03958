"""Command-line front end: simulate, compare, sweep, emit-default.

Outputs are plain CSV traces and summary files; plotting is delegated to an
emitted script so the tool itself stays dependency-light. Exit status is 0
only when every requested output was fully written.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from .metrics import MetricSet, compare, run_metrics
from .scenario_io import ScenarioFileError, default_scenario_yaml, load_scenario
from .sim import (
    ControllerSpec,
    Scenario,
    SimulationDiverged,
    run,
    sweep,
)
from .stability import format_report, stability_report

_PLOT_SCRIPT = """\
#!/usr/bin/env python3
# Auto-generated plotting helper: renders the traces written next to it.
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

TRACES = {traces!r}

fig, (ax_y, ax_u) = plt.subplots(2, 1, figsize=(10, 8), sharex=True)
for label, path in TRACES:
    data = np.genfromtxt(path, delimiter=",", names=True)
    ax_y.plot(data["t"], data["y"], label=label)
    ax_u.plot(data["t"], data["u_applied"], label=label)
ref = np.genfromtxt(TRACES[0][1], delimiter=",", names=True)
ax_y.plot(ref["t"], ref["r"], "k--", alpha=0.5, label="reference")
ax_y.set_ylabel("speed sensor [V]")
ax_y.legend()
ax_y.grid(True)
ax_u.set_ylabel("applied command [V]")
ax_u.set_xlabel("time [s]")
ax_u.legend()
ax_u.grid(True)
fig.tight_layout()
fig.savefig("comparison.png", dpi=120)
print("wrote comparison.png")
"""


def _write_metrics_csv(path: Path, mset: MetricSet) -> None:
    names = [f.name for f in fields(MetricSet)]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        fh.write(",".join(
            str(getattr(mset, n)).lower() if isinstance(getattr(mset, n), bool)
            else f"{getattr(mset, n):.9g}" for n in names) + "\n")


def _write_stability(path: Path, record) -> None:
    if isinstance(record.controller, ControllerSpec):
        path.write_text(format_report(stability_report(record)))
    else:
        path.write_text("not applicable: open-loop run\n")


def _load_scenario(args) -> Scenario:
    sc = load_scenario(args.scenario) if args.scenario else Scenario()
    if getattr(args, "seed", None) is not None:
        sc = replace(sc, seed=args.seed)
    return sc


def _cmd_simulate(args) -> int:
    scenario = _load_scenario(args)
    record = run(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    record.write_csv(out / "trace.csv")
    _write_metrics_csv(out / "metrics.csv", run_metrics(record, band=args.band))
    _write_stability(out / "stability.txt", record)
    print(f"wrote {out / 'trace.csv'} ({len(record)} rows), metrics.csv, stability.txt")
    return 0


def _cmd_compare(args) -> int:
    scenario = _load_scenario(args)
    names = [n.strip() for n in args.controllers.split(",") if n.strip()]
    if not names:
        raise ValueError("no controllers given")
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate controller labels: {', '.join(names)}")
    labeled = [(name, run(replace(scenario, controller=name))) for name in names]
    table = compare(labeled, band=args.band)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traces = []
    for name, record in labeled:
        trace_name = f"trace_{name}.csv"
        record.write_csv(out / trace_name)
        traces.append((name, trace_name))
    table.write_csv(out / "comparison.csv")
    (out / "plot_traces.py").write_text(_PLOT_SCRIPT.format(traces=traces))
    print(table.format_text())
    print(f"wrote {len(traces)} traces, comparison.csv and plot_traces.py to {out}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--values must be a comma list of numbers, got {args.values!r}")
    if not values:
        raise ValueError("no sweep values given")
    records = sweep(scenario, args.axis, values)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary_rows = []
    for i, (value, record) in enumerate(zip(values, records)):
        point_dir = out / f"point_{i:02d}"
        point_dir.mkdir(exist_ok=True)
        record.write_csv(point_dir / "trace.csv")
        mset = run_metrics(record, band=args.band)
        _write_metrics_csv(point_dir / "metrics.csv", mset)
        _write_stability(point_dir / "stability.txt", record)
        if isinstance(record.controller, ControllerSpec):
            gain_ok = str(stability_report(record).gain_condition_met).lower()
        else:
            gain_ok = "n/a"
        summary_rows.append(
            f"{value:.9g},{mset.iae:.9g},{mset.ise:.9g},{mset.itae:.9g},"
            f"{mset.overshoot_pct:.9g},{mset.settling_time:.9g},"
            f"{mset.steady_state_error_pct:.9g},{mset.control_tv:.9g},{gain_ok}")
    header = ("value,iae,ise,itae,overshoot_pct,settling_time,"
              "steady_state_error_pct,control_tv,gain_condition_met")
    (out / "sweep_summary.csv").write_text(header + "\n" + "\n".join(summary_rows) + "\n")
    print(f"wrote {len(records)} sweep points and sweep_summary.csv to {out}")
    return 0


def _cmd_emit_default(args) -> int:
    text = default_scenario_yaml()
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smcpid",
        description="Closed-loop servo speed-control benchmark: simulate, "
                    "compare controller presets, sweep parameters.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario, write trace/metrics/stability")
    p_cmp = sub.add_parser("compare", help="run several controller presets on one scenario")
    p_swp = sub.add_parser("sweep", help="rerun a scenario along one numeric axis")
    p_def = sub.add_parser("emit-default", help="print the default scenario file")

    for p in (p_sim, p_cmp, p_swp):
        p.add_argument("--scenario", metavar="PATH", default=None,
                       help="scenario file; omit for the built-in 400 RPM step")
        p.add_argument("--out", metavar="DIR", required=True, help="output directory")
        p.add_argument("--band", metavar="FRACTION", type=float, default=0.02,
                       help="settling band as a fraction of the step (default 0.02)")
        p.add_argument("--seed", metavar="N", type=int, default=None,
                       help="override the scenario's noise seed")
    p_cmp.add_argument("--controllers", metavar="LIST", default="smcpid,kuhn,naive",
                       help="comma list of controller presets (default smcpid,kuhn,naive)")
    p_swp.add_argument("--axis", metavar="PATH", required=True,
                       help="swept field, e.g. plant.dK or smc.eta")
    p_swp.add_argument("--values", metavar="LIST", required=True,
                       help="comma list of values for the swept field")
    p_def.add_argument("--out", metavar="FILE", default=None,
                       help="write to a file instead of stdout")

    p_sim.set_defaults(func=_cmd_simulate)
    p_cmp.set_defaults(func=_cmd_compare)
    p_swp.set_defaults(func=_cmd_sweep)
    p_def.set_defaults(func=_cmd_emit_default)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioFileError, ValueError, SimulationDiverged, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
