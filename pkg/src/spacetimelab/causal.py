"""Causal precedence at a signal speed and order-preservation checks.

Maps built from a boost, a translation and a positive dilation keep the
precedence relation intact. ``find_violation`` probes arbitrary maps for
pairs whose order they change.

In 1+1 dimensions the order automorphisms are larger than the similarity
group: any pair of increasing functions of the null coordinates
``c t - x`` and ``c t + x`` also preserves precedence. Such maps pass every
probe here, correctly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .frames import Event, FrameError, gamma

CHRONOLOGICAL = "chronological"
CAUSAL = "causal"

EventMap = Callable[[Event], Event]


@dataclass(frozen=True)
class CausalConfig:
    c_s: float = 1.0
    relation: str = CHRONOLOGICAL

    def __post_init__(self):
        if not self.c_s > 0:
            raise ValueError(f"signal speed must be positive, got {self.c_s}")
        if self.relation not in (CHRONOLOGICAL, CAUSAL):
            raise ValueError(f"relation must be {CHRONOLOGICAL!r} or {CAUSAL!r}")


def precedes(p: Event, q: Event, cfg: CausalConfig = CausalConfig()) -> bool:
    dt = q.t - p.t
    if not dt > 0:
        return False
    dx = q.x - p.x
    s = cfg.c_s * cfg.c_s * dt * dt - dx * dx
    return s > 0 if cfg.relation == CHRONOLOGICAL else s >= 0


def precedence_matrix(t: np.ndarray, x: np.ndarray, cfg: CausalConfig = CausalConfig()) -> np.ndarray:
    """``M[i, j]`` is True when event ``i`` precedes event ``j``."""
    dt = t[None, :] - t[:, None]
    dx = x[None, :] - x[:, None]
    s = cfg.c_s * cfg.c_s * dt * dt - dx * dx
    inside = s > 0 if cfg.relation == CHRONOLOGICAL else s >= 0
    return (dt > 0) & inside


@dataclass(frozen=True)
class SimilarityMap:
    """e -> dilation * Boost(v) e + shift, with ``shift`` given as (t, x)."""

    v: float = 0.0
    shift: tuple[float, float] = (0.0, 0.0)
    dilation: float = 1.0
    c_s: float = 1.0

    def __post_init__(self):
        if not self.dilation > 0:
            raise ValueError(f"dilation must be positive, got {self.dilation}")
        if not abs(self.v) < self.c_s:
            raise FrameError(f"|v|={abs(self.v)} must be below c_s={self.c_s}")

    def __call__(self, e: Event) -> Event:
        return apply_similarity(self, e)


def apply_similarity(m: SimilarityMap, e: Event) -> Event:
    g = gamma(m.v, m.c_s)
    b = m.v / m.c_s
    ct = m.c_s * e.t
    ct2 = m.dilation * g * (ct - b * e.x)
    x2 = m.dilation * g * (e.x - b * ct)
    return Event(ct2 / m.c_s + m.shift[0], x2 + m.shift[1])


def random_similarity(rng: np.random.Generator, c_s: float = 1.0) -> SimilarityMap:
    return SimilarityMap(
        v=float(rng.uniform(-0.95, 0.95)) * c_s,
        shift=(float(rng.uniform(-2, 2)) / c_s, float(rng.uniform(-2, 2))),
        dilation=float(math.exp(rng.uniform(-2, 2))),
        c_s=c_s,
    )


@dataclass(frozen=True)
class Violation:
    p: Event
    q: Event
    before_p: bool  # p precedes q
    before_q: bool  # q precedes p
    after_p: bool  # image of p precedes image of q
    after_q: bool

    def row(self) -> tuple:
        return (self.p.t, self.p.x, self.q.t, self.q.x,
                int(self.before_p), int(self.before_q), int(self.after_p), int(self.after_q))


@dataclass(frozen=True)
class OrderVerdict:
    preserved: bool
    violations: tuple[Violation, ...]
    n_pairs: int


def _images(events: Sequence[Event], fn: EventMap) -> tuple[np.ndarray, np.ndarray]:
    out = [fn(e) for e in events]
    return np.array([e.t for e in out]), np.array([e.x for e in out])


def preserves_order(fn: EventMap, events: Sequence[Event], cfg: CausalConfig = CausalConfig()) -> OrderVerdict:
    """Compare precedence before and after ``fn`` over every pair of events."""
    if len(events) < 2:
        raise ValueError("need at least two events")
    t = np.array([e.t for e in events])
    x = np.array([e.x for e in events])
    before = precedence_matrix(t, x, cfg)
    after = precedence_matrix(*_images(events, fn), cfg)
    bad = (before != after) | (before.T != after.T)
    iu, ju = np.nonzero(np.triu(bad, 1))
    viol = tuple(
        Violation(events[i], events[j], bool(before[i, j]), bool(before[j, i]),
                  bool(after[i, j]), bool(after[j, i]))
        for i, j in zip(iu, ju)
    )
    n = len(events)
    return OrderVerdict(not viol, viol, n * (n - 1) // 2)


def find_violation(fn: EventMap, cfg: CausalConfig = CausalConfig(), n_trials: int = 10_000,
                   seed: int = 0, half_width: float = 1.0, chunk: int = 512) -> tuple[int, Violation] | None:
    """Sample event pairs in the box |c_s t|, |x| <= half_width until one changes order.

    Returns ``(trial_index, violation)`` for the first offending pair, or
    None. All pairs are drawn up front so the result depends only on the
    seed.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    rng = np.random.Generator(np.random.Philox(seed))
    pts = rng.uniform(-half_width, half_width, size=(n_trials, 4))
    pts[:, 0] /= cfg.c_s
    pts[:, 2] /= cfg.c_s
    for start in range(0, n_trials, chunk):
        block = pts[start:start + chunk]
        ps = [Event(float(a), float(b)) for a, b in block[:, :2]]
        qs = [Event(float(a), float(b)) for a, b in block[:, 2:]]
        fps = [fn(e) for e in ps]
        fqs = [fn(e) for e in qs]
        for i, (p, q, fp, fq) in enumerate(zip(ps, qs, fps, fqs)):
            b1, b2 = precedes(p, q, cfg), precedes(q, p, cfg)
            a1, a2 = precedes(fp, fq, cfg), precedes(fq, fp, cfg)
            if b1 != a1 or b2 != a2:
                return start + i, Violation(p, q, b1, b2, a1, a2)
    return None


# ---------------------------------------------------------------------------
# map families used by the probes


def anisotropic(scale_x: float = 2.0, scale_t: float = 1.0) -> EventMap:
    return lambda e: Event(scale_t * e.t, scale_x * e.x)


def quadratic_time_shear(amplitude: float, c_s: float = 1.0) -> EventMap:
    """(c_s t, x) -> (c_s t + amplitude x^2, x)."""
    return lambda e: Event(e.t + amplitude * e.x * e.x / c_s, e.x)


@dataclass(frozen=True)
class QuadraticPerturbation:
    """Identity plus a quadratic polynomial perturbation in (c_s t, x).

    Each output coordinate gains ``amplitude * (a y0^2 + b y0 y1 + c y1^2)``
    with unit-norm coefficient vectors.
    """

    amplitude: float
    coef_t: tuple[float, float, float]
    coef_x: tuple[float, float, float]
    c_s: float = 1.0

    def __call__(self, e: Event) -> Event:
        y0, y1 = self.c_s * e.t, e.x
        mon = (y0 * y0, y0 * y1, y1 * y1)
        dt = sum(c * m for c, m in zip(self.coef_t, mon))
        dx = sum(c * m for c, m in zip(self.coef_x, mon))
        return Event((y0 + self.amplitude * dt) / self.c_s, y1 + self.amplitude * dx)


def random_quadratic(rng: np.random.Generator, min_amplitude: float = 0.05,
                     max_amplitude: float = 0.2, c_s: float = 1.0) -> QuadraticPerturbation:
    ct = rng.normal(size=3)
    cx = rng.normal(size=3)
    ct /= np.linalg.norm(ct)
    cx /= np.linalg.norm(cx)
    amp = float(rng.uniform(min_amplitude, max_amplitude))
    return QuadraticPerturbation(amp, tuple(map(float, ct)), tuple(map(float, cx)), c_s)


def null_monotone(f: Callable[[float], float], g: Callable[[float], float], c_s: float = 1.0) -> EventMap:
    """Map acting as ``f`` on c_s t - x and ``g`` on c_s t + x.

    Order preserving whenever ``f`` and ``g`` are strictly increasing.
    """

    def fn(e: Event) -> Event:
        u = f(c_s * e.t - e.x)
        w = g(c_s * e.t + e.x)
        return Event((u + w) / (2 * c_s), (w - u) / 2)

    return fn
