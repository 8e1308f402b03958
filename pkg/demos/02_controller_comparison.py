"""Benchmark comparison: smcpid vs kuhn vs naive on both preset scenarios.

Runs the three shipped controller presets on the 400 RPM step and on the
varying-speed profile, prints the ranked metric tables, and plots speed and
command traces. The plots make the headline finding obvious: the smcpid and
naive gain sets limit-cycle on this plant at the 10 ms loop, while the
kuhn-synthesis PID converges cleanly (see demo 06 for the why).
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from smcpid import compare, run, step_scenario, varying_scenario, volts_to_rpm

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

PRESETS = ("smcpid", "kuhn", "naive")

for title, make in (("step", step_scenario), ("varying", varying_scenario)):
    records = [(name, run(make(name))) for name in PRESETS]
    table = compare(records)
    print(f"--- {title} scenario ---")
    print(table.format_text())

    fig, (ax_y, ax_u) = plt.subplots(2, 1, figsize=(10, 7), sharex=True)
    for name, rec in records:
        ax_y.plot(rec.t, [volts_to_rpm(v) for v in rec.y], label=name, lw=1.2)
        ax_u.plot(rec.t, rec.u_applied, label=name, lw=0.9)
    ref = records[0][1]
    ax_y.plot(ref.t, [volts_to_rpm(v) for v in ref.r], "k--", alpha=0.6,
              label="reference")
    ax_y.set_ylabel("speed [RPM]")
    ax_y.legend(loc="lower right")
    ax_y.grid(True)
    ax_u.set_ylabel("applied command [V]")
    ax_u.set_xlabel("time [s]")
    ax_u.grid(True)
    fig.suptitle(f"Controller presets on the {title} scenario")
    fig.tight_layout()
    fig.savefig(OUT / f"comparison_{title}.png", dpi=120)
    print(f"wrote {OUT / f'comparison_{title}.png'}\n")
