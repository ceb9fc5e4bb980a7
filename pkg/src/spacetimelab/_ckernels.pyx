# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the chain integrator and the reversible automaton.

Arithmetic is written in the same order as ``_pykernels`` so both backends
produce bit-identical floats (the extension is built with -ffp-contract=off).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef void _accel(const double[::1] u, double[::1] acc, const long[::1] dist,
                 const double[::1] kappa, double mass) noexcept nogil:
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t nh = dist.shape[0]
    cdef Py_ssize_t i, h, d, ip, im
    cdef double f, ui
    for i in range(n):
        f = 0.0
        ui = u[i]
        for h in range(nh):
            d = dist[h]
            ip = i + d
            if ip >= n:
                ip -= n
            im = i - d
            if im < 0:
                im += n
            f = f + kappa[h] * ((u[ip] - ui) + (u[im] - ui))
        acc[i] = f / mass


def verlet_run(double[::1] u, double[::1] v, long[::1] dist, double[::1] kappa,
               double mass, double dt, long n_steps):
    """Advance ``u`` and ``v`` in place by ``n_steps`` velocity-Verlet steps."""
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i
    cdef long s
    cdef double half = 0.5 * dt
    cdef double[::1] acc = np.empty(n, dtype=np.float64)
    if n_steps <= 0:
        return
    with nogil:
        _accel(u, acc, dist, kappa, mass)
        for s in range(n_steps):
            for i in range(n):
                v[i] = v[i] + half * acc[i]
                u[i] = u[i] + dt * v[i]
            _accel(u, acc, dist, kappa, mass)
            for i in range(n):
                v[i] = v[i] + half * acc[i]


def ca_run(cnp.uint8_t[::1] cur, cnp.uint8_t[::1] prev, long radius,
           const cnp.uint8_t[::1] table, long n_steps):
    """Advance a second-order automaton in place; layers rotate each step."""
    cdef Py_ssize_t n = cur.shape[0]
    cdef Py_ssize_t i, j, k
    cdef long s, width = 2 * radius + 1
    cdef unsigned long idx, mask = (1UL << width) - 1
    cdef cnp.uint8_t[::1] nxt = np.empty(n, dtype=np.uint8)
    with nogil:
        for s in range(n_steps):
            # rolling window: shift in the cell radius to the right of i
            idx = 0
            for j in range(width - 1):
                k = j - radius
                if k < 0:
                    k = k + n
                idx = (idx << 1) | cur[k]
            for i in range(n):
                k = i + radius
                if k >= n:
                    k = k - n
                idx = ((idx << 1) | cur[k]) & mask
                nxt[i] = table[idx] ^ prev[i]
            for i in range(n):
                prev[i] = cur[i]
                cur[i] = nxt[i]
