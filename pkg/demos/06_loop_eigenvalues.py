"""Why the smcpid preset rings: eigenvalues of the exact 10 ms discrete loop.

The plant, its 3.25-tick input delay, the rectangular integrator and the
backward-difference derivative together form a linear discrete system (the
switching term is a bounded +-eta perturbation and cannot stabilize a linear
instability). Building that system explicitly and checking its eigenvalues
shows:

  * smcpid gains (Kp 25.1): spectral radius > 1, the loop is unstable; with
    the actuator clamp the divergence saturates into the limit cycle seen in
    demo 02. The plant's ultimate gain at this dead time is about 23, and
    25.1 sits above it.
  * naive gains (1, 1, 1): also unstable, mainly through the derivative term.
  * kuhn gains: spectral radius < 1, the converging response in demo 02.
  * smcpid gains with the dead time removed: comfortably stable, which is
    the response the gain set appears to have been tuned for.
"""

import numpy as np

from smcpid import NOMINAL, PID_PRESETS


def closed_loop_matrix(kp, ki, kd, dead_time=NOMINAL.dead_time, dt=0.01):
    """Exact one-tick transition matrix of the PID loop on the FOPDT plant.

    State: [y, u1, u2, u3, u4, integral, prev_error]. The command during a
    tick reaches the output through the delay line; with dead time 3.25 ticks
    the effective input mixes u(n-4) and u(n-3) with exact hold weights.
    """
    a = np.exp(-dt / NOMINAL.time_constant)
    ticks = dead_time / dt
    m = int(np.floor(ticks))
    frac = ticks - m
    if m > 3:
        raise ValueError("demo matrix supports dead times up to 4 ticks")
    # exact response to a held input that switches frac*dt into the tick
    e_partial = np.exp(-(1.0 - frac) * dt / NOMINAL.time_constant)
    w_old = NOMINAL.gain * (e_partial - a)      # weight of u(n-m-1)
    w_new = NOMINAL.gain * (1.0 - e_partial)    # weight of u(n-m)

    A = np.zeros((7, 7))
    # u_n = kp*e + ki*(integral + e*dt) + kd*(e - prev_e)/dt with e = r - y;
    # for stability only the homogeneous part (r = 0) matters
    A[1, 0] = -(kp + ki * dt + kd / dt)
    A[1, 5] = ki
    A[1, 6] = -kd / dt
    A[2, 1] = A[3, 2] = A[4, 3] = 1.0
    A[5, 0] = -dt
    A[5, 5] = 1.0
    A[6, 0] = -1.0
    # plant row: u(n-k) lives at state index k; with no delay the tick's own
    # command acts immediately, so its feedback row folds into the plant row
    A[0, 0] = a
    if m >= 1:
        A[0, m] += w_new
    else:
        A[0, :] += w_new * A[1, :]
    if frac > 0:
        A[0, m + 1] += w_old
    return A


print(f"{'gain set':28s} {'spectral radius':>16s}   verdict")
for name in ("smcpid", "kuhn", "naive"):
    g = PID_PRESETS[name]
    radius = np.max(np.abs(np.linalg.eigvals(closed_loop_matrix(g.kp, g.ki, g.kd))))
    verdict = "unstable -> limit cycle" if radius > 1 else "stable"
    print(f"{name:28s} {radius:16.4f}   {verdict}")

g = PID_PRESETS["smcpid"]
radius = np.max(np.abs(np.linalg.eigvals(
    closed_loop_matrix(g.kp, g.ki, g.kd, dead_time=0.0))))
print(f"{'smcpid, dead time removed':28s} {radius:16.4f}   stable"
      f" (the response the tuning implies)")
