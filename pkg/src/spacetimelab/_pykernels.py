"""Pure-numpy versions of the hot loops, used when the extension is absent.

Signatures and arithmetic order mirror ``_ckernels.pyx``.
"""

import numpy as np


def _accel(u, dist, kappa, mass):
    f = np.zeros_like(u)
    for d, k in zip(dist, kappa):
        f = f + k * ((np.roll(u, -int(d)) - u) + (np.roll(u, int(d)) - u))
    return f / mass


def verlet_run(u, v, dist, kappa, mass, dt, n_steps):
    """Advance ``u`` and ``v`` in place by ``n_steps`` velocity-Verlet steps."""
    if n_steps <= 0:
        return
    half = 0.5 * dt
    acc = _accel(u, dist, kappa, mass)
    for _ in range(n_steps):
        v += half * acc
        u += dt * v
        acc = _accel(u, dist, kappa, mass)
        v += half * acc


def ca_run(cur, prev, radius, table, n_steps):
    """Advance a second-order automaton in place; layers rotate each step."""
    radius = int(radius)
    for _ in range(n_steps):
        idx = np.zeros(cur.shape[0], dtype=np.int64)
        for j in range(2 * radius + 1):
            idx = (idx << 1) | np.roll(cur, radius - j)
        nxt = table[idx] ^ prev
        prev[:] = cur
        cur[:] = nxt
