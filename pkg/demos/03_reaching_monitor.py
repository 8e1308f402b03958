"""Surface-energy monitoring: V, its rate, and the reconstructed disturbance.

For a recorded run the monitor derives the surface rate s', the energy rate
V' = s*s', and the lumped term Delta = s' - lambda2*b*u_smc that collects
everything the switching term has to dominate. The reaching condition asks
for eta > max|Delta| / (lambda2*b); the report says whether that held.

Two runs are shown: the kuhn PID with the standard switching term added on
top (a converging loop), and the shipped smcpid preset (which limit-cycles,
so its reconstructed disturbance bound dwarfs any reasonable eta). The
monitor is a measurement tool: a failed condition on a recorded run means
the assumed bound did not hold there, nothing more.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from smcpid import (
    PID_PRESETS,
    SMC_PRESET,
    ControllerSpec,
    delta_series,
    run,
    stability_report,
    step_scenario,
)
from smcpid.stability import format_report

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

CASES = {
    "kuhn_plus_switching": ControllerSpec(PID_PRESETS["kuhn"], SMC_PRESET,
                                          label="kuhn+smc"),
    "smcpid": "smcpid",
}

fig, axes = plt.subplots(3, len(CASES), figsize=(12, 8), sharex="col")
for col, (name, controller) in enumerate(CASES.items()):
    record = run(step_scenario(controller))
    report = stability_report(record)
    print(f"--- {name} ---")
    print(format_report(report))

    b = record.scenario.plant.b
    axes[0, col].plot(record.t, record.s, lw=0.9)
    axes[0, col].axhspan(-SMC_PRESET.phi, SMC_PRESET.phi, color="orange",
                         alpha=0.25, label="boundary layer")
    axes[0, col].set_title(name)
    axes[0, col].set_ylabel("surface s")
    axes[0, col].legend(loc="upper right")
    axes[1, col].plot(record.t, record.v_dot, lw=0.9)
    axes[1, col].axhline(0.0, color="k", lw=0.8)
    axes[1, col].set_ylabel("energy rate V'")
    axes[2, col].plot(record.t[1:], delta_series(record, b), lw=0.9)
    axes[2, col].set_ylabel("reconstructed Delta")
    axes[2, col].set_xlabel("time [s]")
    for ax in axes[:, col]:
        ax.grid(True)

fig.suptitle("Reaching-condition monitor on two closed-loop runs")
fig.tight_layout()
fig.savefig(OUT / "reaching_monitor.png", dpi=120)
print(f"wrote {OUT / 'reaching_monitor.png'}")
