"""Robustness study: controller quality across plant-parameter perturbations.

Sweeps the plant gain and time constant by +-20 percent around nominal (a
3x3 grid) while the controllers keep their nominal tuning, then tabulates
IAE and steady-state error at every grid point. The same machinery is
available from the command line via `smcpid sweep --axis plant.dK ...`.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smcpid import run, run_metrics, step_scenario

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

LEVELS = (-0.2, 0.0, 0.2)
PRESETS = ("smcpid", "kuhn", "naive")

results = {}
for name in PRESETS:
    iae = np.zeros((3, 3))
    sse = np.zeros((3, 3))
    for i, dk in enumerate(LEVELS):
        for j, dtau in enumerate(LEVELS):
            m = run_metrics(run(step_scenario(name, perturbation=(dk, dtau, 0.0))))
            iae[i, j] = m.iae
            sse[i, j] = m.steady_state_error_pct
    results[name] = (iae, sse)
    worst_ratio = iae.max() / iae[1, 1]
    print(f"{name:7s}: nominal IAE {iae[1, 1]:7.3f}  worst IAE {iae.max():7.3f} "
          f"(ratio {worst_ratio:.3f})  worst sse {sse.max():6.2f}%")

fig, axes = plt.subplots(1, len(PRESETS), figsize=(13, 4))
for ax, name in zip(axes, PRESETS):
    iae = results[name][0]
    im = ax.imshow(iae, origin="lower", cmap="viridis")
    ax.set_xticks(range(3), [f"{d:+.0%}" for d in LEVELS])
    ax.set_yticks(range(3), [f"{d:+.0%}" for d in LEVELS])
    ax.set_xlabel("time-constant perturbation")
    if ax is axes[0]:
        ax.set_ylabel("gain perturbation")
    ax.set_title(f"{name}: IAE")
    for i in range(3):
        for j in range(3):
            ax.text(j, i, f"{iae[i, j]:.2f}", ha="center", va="center",
                    color="white", fontsize=8)
    fig.colorbar(im, ax=ax, shrink=0.8)
fig.suptitle("IAE across +-20% plant perturbations (400 RPM step)")
fig.tight_layout()
fig.savefig(OUT / "robustness_grid.png", dpi=120)
print(f"wrote {OUT / 'robustness_grid.png'}")
