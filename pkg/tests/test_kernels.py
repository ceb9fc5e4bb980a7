import numpy as np
import pytest

from spacetimelab import _pykernels, kernels

ckernels = pytest.importorskip("spacetimelab._ckernels")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_verlet_backends_bit_identical():
    rng = np.random.default_rng(5)
    u0, v0 = rng.normal(size=257), rng.normal(size=257)
    dist = np.array([1, 2, 7], dtype=np.int64)
    kappa = np.array([1.0, 0.3, 0.05])
    out = []
    for mod in (ckernels, _pykernels):
        u, v = u0.copy(), v0.copy()
        mod.verlet_run(u, v, dist, kappa, 1.3, 0.01, 500)
        out.append((u, v))
    assert np.array_equal(out[0][0], out[1][0])
    assert np.array_equal(out[0][1], out[1][1])


def test_ca_backends_identical():
    rng = np.random.default_rng(6)
    r = 2
    table = rng.integers(0, 2, size=1 << (2 * r + 1)).astype(np.uint8)
    table[0] = 0
    c0 = rng.integers(0, 2, size=99).astype(np.uint8)
    p0 = rng.integers(0, 2, size=99).astype(np.uint8)
    out = []
    for mod in (ckernels, _pykernels):
        c, p = c0.copy(), p0.copy()
        mod.ca_run(c, p, r, table, 77)
        out.append((c, p))
    assert np.array_equal(out[0][0], out[1][0])
    assert np.array_equal(out[0][1], out[1][1])


def test_zero_steps_noop():
    u, v = np.ones(5), np.ones(5)
    for mod in (ckernels, _pykernels):
        mod.verlet_run(u, v, np.array([1], dtype=np.int64), np.array([1.0]), 1.0, 0.1, 0)
    assert (u == 1).all() and (v == 1).all()
