"""Dispersion, group velocity and signal fronts on the oscillator chain.

Also holds the phased-array excitation schedules that move a drive locus
``c_mult`` lattice units per tick across the chain.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .substrate import ChainHistory, ChainState, CouplingProfile, ConfigurationError, excite, fmt, run_chain

GRID_POINTS = 1024
GOLDEN_TOL = 1e-9
DEFAULT_FRONT_FRACTION = 1e-3
MIN_CROSSED_SITES = 8


class InsufficientSignalError(ValueError):
    """Too few sites crossed the front threshold to fit a speed."""


def omega(k, profile: CouplingProfile):
    """Angular frequency of a lattice plane wave; ``k`` may be an array."""
    k = np.asarray(k, dtype=np.float64)
    a, m = profile.spacing, profile.mass
    s = np.zeros_like(k)
    for d, kappa in profile.hops:
        s = s + kappa * np.sin(k * d * a / 2) ** 2
    w = np.sqrt(4.0 / m * s)
    return float(w) if w.ndim == 0 else w


def long_wave_speed(profile: CouplingProfile) -> float:
    """Group velocity in the k -> 0 limit: a * sqrt(sum kappa_d d^2 / m)."""
    return profile.spacing * math.sqrt(sum(kap * d * d for d, kap in profile.hops) / profile.mass)


def group_velocity(k, profile: CouplingProfile):
    """d omega / dk.

    Where omega vanishes (k = 0 and, for some profiles, other lattice zeros)
    the right-hand limit is returned.
    """
    k = np.asarray(k, dtype=np.float64)
    a, m = profile.spacing, profile.mass
    num = np.zeros_like(k)
    for d, kappa in profile.hops:
        num = num + kappa * d * np.sin(k * d * a)
    w = np.atleast_1d(omega(k, profile))
    num = np.atleast_1d(num)
    out = np.empty_like(w)
    zero = w < 1e-300
    out[~zero] = a * num[~zero] / (m * w[~zero])
    out[zero] = long_wave_speed(profile)
    return float(out[0]) if k.ndim == 0 else out.reshape(k.shape)


def _golden_max(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> float:
    inv_phi = (math.sqrt(5) - 1) / 2
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = f(d)
    return (lo + hi) / 2


def _grid_refined_max(f, upper: float) -> float:
    ks = np.linspace(0.0, upper, GRID_POINTS)
    vals = f(ks)
    i = int(np.argmax(vals))
    lo = ks[max(i - 1, 0)]
    hi = ks[min(i + 1, GRID_POINTS - 1)]
    k_best = _golden_max(lambda k: float(f(k)), float(lo), float(hi))
    return max(float(vals[i]), float(f(k_best)))


@lru_cache(maxsize=256)
def max_signal_speed(profile: CouplingProfile) -> float:
    """Maximum group velocity over k in [0, pi/a]: 1024-point seed grid plus golden-section refinement."""
    return _grid_refined_max(lambda k: group_velocity(k, profile), math.pi / profile.spacing)


@lru_cache(maxsize=256)
def max_frequency(profile: CouplingProfile) -> float:
    """max_k omega(k) over the Brillouin zone, same search as the speed maximum."""
    return _grid_refined_max(lambda k: omega(k, profile), math.pi / profile.spacing)


@dataclass(frozen=True)
class DispersionCurve:
    profile: CouplingProfile
    k: np.ndarray
    omega: np.ndarray
    vg: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "omega", "vg"])
        for row in zip(self.k, self.omega, self.vg):
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()


def dispersion_curve(profile: CouplingProfile, n_k: int = GRID_POINTS) -> DispersionCurve:
    ks = np.linspace(0.0, math.pi / profile.spacing, n_k)
    return DispersionCurve(profile, ks, omega(ks, profile), group_velocity(ks, profile))


# ---------------------------------------------------------------------------
# phased-array schedules


@dataclass(frozen=True)
class ExcitationSchedule:
    """Ordered ``(tick, site)`` pairs, sites 1-based as in the array table.

    One tick is the time the slowest signal needs to hop one lattice unit.
    """

    entries: tuple[tuple[int, int], ...]
    c_mult: int
    spacing: float = 1.0

    def __post_init__(self):
        ticks = [t for t, _ in self.entries]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ConfigurationError("schedule ticks must be strictly increasing")

    @property
    def drive_speed(self) -> float:
        """Locus speed in lattice lengths per tick."""
        return self.c_mult * self.spacing

    def grid(self, n_sites: int) -> np.ndarray:
        """0/1 matrix (ticks x sites), the layout of the printed array table."""
        n_ticks = self.entries[-1][0] + 1 if self.entries else 0
        g = np.zeros((n_ticks, n_sites), dtype=np.uint8)
        for t, s in self.entries:
            g[t, s - 1] = 1
        return g

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tick", "site"])
        w.writerows(self.entries)
        return buf.getvalue()


def table1_schedule(c_mult: int, n_sites: int, max_tick: int | None = None,
                    spacing: float = 1.0) -> ExcitationSchedule:
    """Excite site ``1 + c_mult * t`` at tick ``t`` while it stays on the array."""
    if int(c_mult) != c_mult or c_mult < 1:
        raise ConfigurationError(f"c_mult must be a positive integer, got {c_mult}")
    if max_tick is None:
        max_tick = n_sites
    entries = []
    t = 0
    while 1 + c_mult * t <= n_sites and t <= max_tick:
        entries.append((t, 1 + c_mult * t))
        t += 1
    return ExcitationSchedule(tuple(entries), int(c_mult), spacing)


def drive(state: ChainState, schedule: ExcitationSchedule, impulse: float, dt: float,
          ticks_per_unit: int = 100, n_ticks: int | None = None, origin: int = 0) -> ChainHistory:
    """Integrate the chain, kicking each scheduled site at its tick.

    Schedule site ``s`` maps to chain index ``origin + s - 1``. Row ``t`` of
    the returned history is the state at tick ``t`` right after that tick's
    kicks; ``ticks_per_unit`` Verlet steps of size ``dt`` separate rows.
    """
    kicks: dict[int, int] = {}
    for t, s in schedule.entries:
        site = origin + s - 1
        if not 0 <= site < state.n:
            raise ConfigurationError(f"scheduled site {s} maps outside the chain")
        kicks[t] = site
    if n_ticks is None:
        n_ticks = (schedule.entries[-1][0] + 1) if schedule.entries else 1
    us = np.empty((n_ticks, state.n))
    vs = np.empty((n_ticks, state.n))
    times = np.empty(n_ticks)
    for t in range(n_ticks):
        if t:
            state = run_chain(state, dt, ticks_per_unit)
        if t in kicks:
            state = excite(state, kicks[t], impulse)
        us[t] = state.u
        vs[t] = state.v
        times[t] = state.t
    return ChainHistory(np.arange(n_ticks), times, us, vs, state.profile.spacing,
                        tuple(kicks[t] for t in sorted(kicks)))


# ---------------------------------------------------------------------------
# front speed


@dataclass(frozen=True)
class FrontFit:
    threshold: float
    sites: np.ndarray
    distances: np.ndarray
    crossing_times: np.ndarray
    speed: float
    residual: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["site", "crossing_time"])
        order = np.argsort(self.sites, kind="stable")
        for i in order:
            w.writerow([int(self.sites[i]), fmt(self.crossing_times[i])])
        return buf.getvalue()


def estimate_front_speed(history: ChainHistory, eps_front: float | None = None,
                         source: int | None = None, side: str = "both") -> FrontFit:
    """Fit the speed of the first-crossing front of ``|u| > eps_front``.

    ``eps_front`` defaults to 1e-3 of the largest displacement in the run.
    Distances are periodic and measured from ``source`` (default: the first
    excited site). ``side`` restricts to sites ahead (``"forward"``) or behind
    (``"backward"``) of the source. The fit is time = slope * distance +
    intercept over the middle half of crossed sites ordered by distance;
    speed is ``1 / slope``.
    """
    if side not in ("both", "forward", "backward"):
        raise ValueError(f"unknown side {side!r}")
    amp = np.abs(history.u)
    if eps_front is None:
        eps_front = DEFAULT_FRONT_FRACTION * float(amp.max(initial=0.0))
    if source is None:
        source = history.sources[0] if history.sources else history.n_sites // 2
    crossed = amp > eps_front
    hit = crossed.any(axis=0)
    first = np.argmax(crossed, axis=0)
    n = history.n_sites
    sites = np.arange(n)
    offset = (sites - source + n // 2) % n - n // 2
    keep = hit & (offset != 0)
    if side == "forward":
        keep &= offset > 0
    elif side == "backward":
        keep &= offset < 0
    sites = sites[keep]
    dist = np.abs(offset[keep]) * history.spacing
    times = history.times[first[keep]]
    if sites.size < MIN_CROSSED_SITES:
        raise InsufficientSignalError(f"only {sites.size} sites crossed threshold {eps_front:.3g}")
    order = np.argsort(dist, kind="stable")
    lo, hi = sites.size // 4, sites.size - sites.size // 4
    win = order[lo:hi]
    if win.size < 2 or np.ptp(dist[win]) == 0:
        raise InsufficientSignalError("fit window spans no distance")
    slope, intercept = np.polyfit(dist[win], times[win], 1)
    resid = times[win] - (slope * dist[win] + intercept)
    speed = 1.0 / slope if slope > 0 else math.inf
    return FrontFit(float(eps_front), sites, dist, times, float(speed),
                    float(np.sqrt(np.mean(resid ** 2))))


def kick_response(profile: CouplingProfile, n_sites: int, duration: float, dt: float,
                  impulse: float = 1.0, substeps: int | None = None) -> ChainHistory:
    """Single velocity kick at the chain centre, recorded every unit time."""
    from .substrate import new_chain, record_chain

    if substeps is None:
        substeps = max(1, int(round(1.0 / dt)))
    state = excite(new_chain(n_sites, profile), n_sites // 2, impulse)
    n_ticks = int(math.floor(duration / (dt * substeps))) + 1
    return record_chain(state, dt, substeps, n_ticks, sources=(n_sites // 2,))
