"""Intrinsic space-time frames built from round-trip signalling.

Signals travel at a conventional speed ``c_s`` in the medium frame. Observers
carry transverse light clocks and assign radar coordinates to events; the
map between two observers' charts is recovered by a least-squares fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class FrameError(ValueError):
    """Observer speed at or beyond the signal speed, or bad convention."""


class RankError(ValueError):
    """Event set does not affinely span the plane."""


@dataclass(frozen=True)
class Event:
    t: float
    x: float

    def __iter__(self):
        yield self.t
        yield self.x


@dataclass(frozen=True)
class ObserverFrame:
    """Inertial worldline ``x(t) = x0 + v t`` with a signal convention."""

    v: float = 0.0
    c_s: float = 1.0
    x0: float = 0.0
    epsilon: float = 0.5

    def __post_init__(self):
        if not self.c_s > 0:
            raise FrameError(f"signal speed must be positive, got {self.c_s}")
        if not abs(self.v) < self.c_s:
            raise FrameError(f"|v|={abs(self.v)} must be below c_s={self.c_s}")
        if not 0.0 < self.epsilon < 1.0:
            raise FrameError(f"epsilon must lie in (0, 1), got {self.epsilon}")

    def position(self, t: float) -> float:
        return self.x0 + self.v * t


def light_clock_gamma(v: float, c_s: float = 1.0, arm: float = 1.0) -> float:
    """Period dilation of a transverse light clock moving at ``v``.

    The signal bounces between two mirrors a distance ``arm`` apart,
    perpendicular to the motion. In the medium frame each leg satisfies
    sqrt(arm^2 + (v dt)^2) = c_s dt; the ratio of the medium-frame round trip
    to the rest-frame one ``2 arm / c_s`` is returned.
    """
    if not c_s > 0:
        raise FrameError("signal speed must be positive")
    if not abs(v) < c_s:
        raise FrameError(f"no round trip exists for |v|={abs(v)} >= c_s={c_s}")
    # (c_s^2 - v^2) dt^2 = arm^2, solved per leg
    leg = arm / math.sqrt((c_s - v) * (c_s + v))
    return (2 * leg) / (2 * arm / c_s)


def signal_times(e: Event, obs: ObserverFrame) -> tuple[float, float]:
    """Medium times at which the observer must emit, and will receive, a radar echo from ``e``."""
    c, v = obs.c_s, obs.v
    dx = e.x - obs.x0
    if e.x - obs.position(e.t) >= 0:
        t1 = (c * e.t - dx) / (c - v)
        t2 = (c * e.t + dx) / (c + v)
    else:
        t1 = (c * e.t + dx) / (c + v)
        t2 = (c * e.t - dx) / (c - v)
    return t1, t2


def radar_coordinates(e: Event, obs: ObserverFrame) -> tuple[float, float]:
    """Observer's (proper time, proper distance) of event ``e``.

    Emission and reception are read on the observer's clock (zero where the
    worldline crosses t = 0). The time is ``(1-eps) tau1 + eps tau2``, the
    distance ``c_s (tau2 - tau1) / 2``, signed positive for events in the +x
    direction.
    """
    t1, t2 = signal_times(e, obs)
    g = light_clock_gamma(obs.v, obs.c_s)
    tau1, tau2 = t1 / g, t2 / g
    tau = (1 - obs.epsilon) * tau1 + obs.epsilon * tau2
    xi = obs.c_s * (tau2 - tau1) / 2
    if e.x - obs.position(e.t) < 0:
        xi = -xi
    return tau, xi


def cristian_offset(t_send: float, t_server: float, t_recv: float, epsilon: float = 0.5) -> float:
    """Clock offset of a server relative to the client.

    The server's timestamp is assumed taken ``epsilon`` of the way through the
    round trip; ``epsilon = 1/2`` is the classical halving estimate.
    """
    if t_recv < t_send:
        raise ValueError(f"receive time {t_recv} precedes send time {t_send}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    return t_server - (t_send + epsilon * (t_recv - t_send))


@dataclass(frozen=True, eq=False)
class LinearMap2:
    """Affine map on ``(c_s t, x)``: y = matrix @ (c_s t, x) + offset."""

    matrix: np.ndarray
    offset: np.ndarray = field(default_factory=lambda: np.zeros(2))
    c_s: float = 1.0
    residual: float = 0.0

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64).reshape(2, 2)
        b = np.array(self.offset, dtype=np.float64).reshape(2)
        if abs(np.linalg.det(m)) < 1e-300:
            raise RankError("transformation matrix is singular")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", b)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def __call__(self, e: Event) -> Event:
        y = self.matrix @ np.array([self.c_s * e.t, e.x]) + self.offset
        return Event(float(y[0] / self.c_s), float(y[1]))

    def entries(self) -> tuple[float, ...]:
        """``m00, m01, m10, m11, b0, b1``."""
        return (*self.matrix.ravel().tolist(), *self.offset.tolist())


def gamma(v: float, c_s: float = 1.0) -> float:
    if not abs(v) < c_s:
        raise FrameError(f"|v|={abs(v)} must be below c_s={c_s}")
    return 1.0 / math.sqrt((1 - v / c_s) * (1 + v / c_s))


def lorentz(v: float, c_s: float = 1.0) -> LinearMap2:
    g = gamma(v, c_s)
    b = v / c_s
    return LinearMap2(np.array([[g, -g * b], [-g * b, g]]), np.zeros(2), c_s)


def compose_velocity(v1: float, v2: float, c_s: float = 1.0) -> float:
    """Velocity of a frame moving at ``v2`` as seen from one moving at ``v1``."""
    return (v2 - v1) / (1 - v1 * v2 / c_s ** 2)


def _chart(events: Sequence[Event], obs: ObserverFrame) -> np.ndarray:
    rows = [radar_coordinates(e, obs) for e in events]
    return np.array([[obs.c_s * tau, xi] for tau, xi in rows])


def fit_transformation(events: Sequence[Event], a: ObserverFrame, b: ObserverFrame) -> LinearMap2:
    """Least-squares affine map from A's radar chart to B's for the same events."""
    if a.c_s != b.c_s:
        raise FrameError("frames must share the signal speed")
    if a.epsilon != b.epsilon:
        raise FrameError("frames must share the simultaneity convention")
    if len(events) < 3:
        raise RankError("need at least three events")
    ya = _chart(events, a)
    yb = _chart(events, b)
    scale = max(float(np.abs(ya).max()), 1e-300)
    design = np.column_stack([ya / scale, np.ones(len(events))])
    if np.linalg.matrix_rank(design) < 3:
        raise RankError("events are collinear")
    coef, *_ = np.linalg.lstsq(design, yb, rcond=None)
    matrix = coef[:2].T / scale
    offset = coef[2]
    resid = yb - (ya @ matrix.T + offset)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return LinearMap2(matrix, offset, a.c_s, rms)


def interval(e1: Event, e2: Event, c_s: float = 1.0) -> float:
    """Squared interval c_s^2 dt^2 - dx^2."""
    dt = e2.t - e1.t
    dx = e2.x - e1.x
    return c_s * c_s * dt * dt - dx * dx


def interval_residual(events: Sequence[Event], a: ObserverFrame, b: ObserverFrame) -> float:
    """Largest disagreement of pairwise intervals between two radar charts, relative to their scale."""
    ya = _chart(events, a)
    yb = _chart(events, b)

    def intervals(y):
        d = y[:, None, :] - y[None, :, :]
        return d[..., 0] ** 2 - d[..., 1] ** 2

    ia, ib = intervals(ya), intervals(yb)
    scale = max(float(np.abs(ia).max()), 1e-300)
    return float(np.abs(ia - ib).max() / scale)


def random_events(n: int, rng: np.random.Generator, c_s: float = 1.0, half_width: float = 1.0) -> list[Event]:
    """Events uniform in the box |c_s t|, |x| <= half_width."""
    ct = rng.uniform(-half_width, half_width, n)
    x = rng.uniform(-half_width, half_width, n)
    return [Event(float(a / c_s), float(b)) for a, b in zip(ct, x)]
