import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from spacetimelab.frames import (
    Event, FrameError, LinearMap2, ObserverFrame, RankError, compose_velocity, cristian_offset,
    fit_transformation, interval, interval_residual, light_clock_gamma, lorentz, radar_coordinates,
    random_events, signal_times,
)

V_GRID = [round(0.1 * i, 1) for i in range(-9, 10)]
C_VALUES = [0.5, 1.0, 2.0, 299792458.0]


def transverse_period_oracle(v, c, arm=1.0):
    """Root-find one leg of the bouncing signal, then double it."""
    leg = brentq(lambda dt: c * dt - math.hypot(arm, v * dt), 0.0, 1e6 * arm / c + 1.0, xtol=1e-15, rtol=1e-15)
    return 2 * leg / (2 * arm / c)


class TestLightClock:
    def test_rest(self):
        assert light_clock_gamma(0.0) == 1.0

    def test_example(self):
        assert light_clock_gamma(0.6, 1.0) == pytest.approx(1.25, abs=1e-12)

    @pytest.mark.parametrize("v", [0.1, 0.5, 0.9, -0.7, 0.99])
    def test_matches_root_finding(self, v):
        assert light_clock_gamma(v, 1.0) == pytest.approx(transverse_period_oracle(v, 1.0), rel=1e-9)
        assert light_clock_gamma(v, 1.0) == pytest.approx(1 / math.sqrt(1 - v * v), rel=1e-9)

    def test_boundary(self):
        assert math.isfinite(light_clock_gamma(0.99999, 1.0))
        assert light_clock_gamma(0.99999, 1.0) > 200
        with pytest.raises(FrameError):
            light_clock_gamma(1.0, 1.0)


class TestRadar:
    def test_rest_identity(self):
        assert radar_coordinates(Event(5, 3), ObserverFrame(0.0)) == (5.0, 3.0)

    def test_moving_example(self):
        obs = ObserverFrame(0.6)
        assert signal_times(Event(0, 1), obs) == pytest.approx((-2.5, 0.625))
        tau, xi = radar_coordinates(Event(0, 1), obs)
        assert (tau, xi) == pytest.approx((-0.75, 1.25), abs=1e-12)

    def test_convention_shift(self):
        e = Event(0, 1)
        t1, t2 = signal_times(e, ObserverFrame(0.6))
        tau_half, xi_half = radar_coordinates(e, ObserverFrame(0.6))
        tau7, xi7 = radar_coordinates(e, ObserverFrame(0.6, epsilon=0.7))
        assert tau7 - tau_half == pytest.approx(0.2 * (t2 - t1) / 1.25, abs=1e-12)
        assert xi7 == xi_half

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-0.95, 0.95), st.floats(-5, 5), st.floats(-5, 5), st.sampled_from(C_VALUES))
    def test_radar_is_boost(self, beta, t, x, c):
        obs = ObserverFrame(beta * c, c)
        e = Event(t / c, x)
        tau, xi = radar_coordinates(e, obs)
        expect = lorentz(beta * c, c)(e)
        assert tau * c == pytest.approx(expect.t * c, abs=1e-9 * (1 + abs(t) + abs(x)) * 10)
        assert xi == pytest.approx(expect.x, abs=1e-9 * (1 + abs(t) + abs(x)) * 10)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-0.9, 0.9), st.floats(-5, 5), st.floats(-5, 5))
    def test_round_trip_consistency(self, v, t, x):
        obs = ObserverFrame(v)
        t1, t2 = signal_times(Event(t, x), obs)
        g = light_clock_gamma(v)
        _, xi = radar_coordinates(Event(t, x), obs)
        assert abs(xi) == pytest.approx(obs.c_s * (t2 / g - t1 / g) / 2, abs=1e-12)
        assert t1 <= t + 1e-12 and t2 >= t - 1e-12

    def test_observer_validation(self):
        with pytest.raises(FrameError):
            ObserverFrame(1.0, 1.0)
        with pytest.raises(FrameError):
            ObserverFrame(0.0, epsilon=1.0)


class TestCristian:
    def test_symmetric(self):
        assert cristian_offset(0, 5, 10) == 0

    def test_convention(self):
        assert cristian_offset(0, 5, 10, 0.7) == pytest.approx(-2.0)

    def test_bad_timestamps(self):
        with pytest.raises(ValueError):
            cristian_offset(10, 5, 0)


class TestLorentz:
    def test_identity(self):
        assert np.array_equal(lorentz(0.0).matrix, np.eye(2))

    def test_example(self):
        e = lorentz(0.6, 1.0)(Event(0, 1))
        assert (e.t, e.x) == pytest.approx((-0.75, 1.25))

    def test_determinant(self, rng):
        for v in rng.uniform(-0.999, 0.999, 100):
            assert lorentz(v).determinant == pytest.approx(1.0, abs=1e-9)

    def test_superluminal(self):
        with pytest.raises(FrameError):
            lorentz(2.0, 2.0)

    def test_singular_map(self):
        with pytest.raises(RankError):
            LinearMap2(np.zeros((2, 2)))

    def test_interval_examples(self):
        assert interval(Event(1, 2), Event(1, 2)) == 0
        assert interval(Event(0, 0), Event(1, 0)) == 1

    def test_interval_invariance(self, rng):
        for _ in range(1000):
            v = rng.uniform(-0.99, 0.99)
            c = float(rng.choice(C_VALUES))
            L = lorentz(v * c, c)
            p = Event(rng.uniform(-1, 1) / c, rng.uniform(-1, 1))
            q = Event(rng.uniform(-1, 1) / c, rng.uniform(-1, 1))
            assert interval(L(p), L(q), c) == pytest.approx(interval(p, q, c), abs=1e-9)


class TestFit:
    def test_identity(self, rng):
        ev = random_events(10, rng)
        m = fit_transformation(ev, ObserverFrame(0.3), ObserverFrame(0.3))
        assert np.allclose(m.matrix, np.eye(2), atol=1e-12)
        assert m.residual < 1e-12

    def test_boost(self, rng):
        m = fit_transformation(random_events(20, rng), ObserverFrame(0.0), ObserverFrame(0.6))
        assert np.allclose(m.matrix, lorentz(0.6).matrix, rtol=0, atol=1e-6)
        assert m.residual < 1e-9

    def test_velocity_composition(self, rng):
        m = fit_transformation(random_events(20, rng), ObserverFrame(0.5), ObserverFrame(0.8))
        w = -m.matrix[0, 1] / m.matrix[0, 0]
        assert compose_velocity(0.5, 0.8) == pytest.approx(0.5, abs=1e-15)
        assert w == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize("c", C_VALUES)
    def test_emergent_lorentz_grid(self, c, rng):
        ev = random_events(20, rng, c)
        for b in V_GRID:
            m = fit_transformation(ev, ObserverFrame(0.0, c), ObserverFrame(b * c, c))
            exact = lorentz(b * c, c).matrix
            assert np.abs(m.matrix - exact).max() <= 1e-6 * np.abs(exact).max()

    def test_means_relativity(self, rng):
        base = random_events(20, rng)
        for lam in (0.5, 3.0, 1e4):
            scaled = [type(e)(e.t / lam, e.x) for e in base]
            m1 = fit_transformation(base, ObserverFrame(0.2), ObserverFrame(-0.7))
            m2 = fit_transformation(scaled, ObserverFrame(0.2 * lam, lam), ObserverFrame(-0.7 * lam, lam))
            assert np.allclose(m1.matrix, m2.matrix, rtol=1e-9, atol=1e-12)

    def test_convention_dependence(self, rng):
        ev = random_events(30, rng)
        a7, b7 = ObserverFrame(0.0, epsilon=0.7), ObserverFrame(0.6, epsilon=0.7)
        fit_transformation(ev, a7, b7)
        assert interval_residual(ev, a7, b7) > 1e-3
        assert interval_residual(ev, ObserverFrame(0.0), ObserverFrame(0.6)) < 1e-12

    def test_collinear(self):
        ev = [Event(float(i), 2.0 * i) for i in range(5)]
        with pytest.raises(RankError):
            fit_transformation(ev, ObserverFrame(0.0), ObserverFrame(0.5))

    def test_mismatched_frames(self, rng):
        with pytest.raises(FrameError):
            fit_transformation(random_events(5, rng), ObserverFrame(0.0, 1.0), ObserverFrame(0.0, 2.0))
