"""Signal-carrier substrates: a periodic coupled-oscillator chain with
multi-neighbour hopping, and a second-order reversible cellular automaton.

Both are plain value types; every operation returns a new state.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import kernels

#: Verlet stability guard: dt must not exceed this fraction of 1/omega_max.
STABILITY_FACTOR = 0.1


class ConfigurationError(ValueError):
    """Invalid substrate parameters (sizes, hops, rules, sites)."""


class StepSizeError(ValueError):
    """Integration step outside the stability guard."""


@dataclass(frozen=True)
class CouplingProfile:
    """Hop distance -> stiffness table, plus oscillator mass and lattice spacing.

    ``hops`` is normalised to a tuple of ``(distance, stiffness)`` pairs sorted
    by distance.
    """

    hops: tuple[tuple[int, float], ...]
    mass: float = 1.0
    spacing: float = 1.0

    def __post_init__(self):
        if isinstance(self.hops, dict):
            items = list(self.hops.items())
        else:
            items = [tuple(h) for h in self.hops]
        if not items:
            raise ConfigurationError("coupling profile needs at least one hop")
        norm = []
        for d, k in items:
            if int(d) != d or int(d) < 1:
                raise ConfigurationError(f"hop distance must be a positive integer, got {d!r}")
            if not (float(k) > 0.0 and np.isfinite(k)):
                raise ConfigurationError(f"stiffness must be positive, got {k!r}")
            norm.append((int(d), float(k)))
        dists = [d for d, _ in norm]
        if len(set(dists)) != len(dists):
            raise ConfigurationError(f"duplicate hop distances in {dists}")
        if not (self.mass > 0 and self.spacing > 0):
            raise ConfigurationError("mass and spacing must be positive")
        object.__setattr__(self, "hops", tuple(sorted(norm)))
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "spacing", float(self.spacing))

    @classmethod
    def single(cls, distance: int, stiffness: float = 1.0, mass: float = 1.0,
               spacing: float = 1.0) -> "CouplingProfile":
        return cls(((distance, stiffness),), mass, spacing)

    @property
    def max_hop(self) -> int:
        return self.hops[-1][0]

    @property
    def distances(self) -> np.ndarray:
        return np.array([d for d, _ in self.hops], dtype=np.int64)

    @property
    def stiffnesses(self) -> np.ndarray:
        return np.array([k for _, k in self.hops], dtype=np.float64)


def _check_length(n: int, profile: CouplingProfile) -> None:
    # n > 2d + 1 keeps the +d and -d neighbours distinct with room to spare on the ring
    if n <= 2 * profile.max_hop + 1:
        raise ConfigurationError(
            f"chain of {n} sites too short for hop {profile.max_hop} (need n > {2 * profile.max_hop + 1})"
        )


@dataclass(frozen=True, eq=False)
class ChainState:
    u: np.ndarray
    v: np.ndarray
    profile: CouplingProfile
    t: float = 0.0

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64)
        v = np.array(self.v, dtype=np.float64)
        if u.ndim != 1 or u.shape != v.shape:
            raise ConfigurationError("u and v must be 1-d arrays of equal length")
        _check_length(u.shape[0], self.profile)
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def momentum(self) -> float:
        return float(self.profile.mass * np.sum(self.v))


def new_chain(n: int, profile: CouplingProfile) -> ChainState:
    """All-zero chain of ``n`` sites at time zero."""
    _check_length(n, profile)
    return ChainState(np.zeros(n), np.zeros(n), profile, 0.0)


def max_step(profile: CouplingProfile) -> float:
    """Largest admissible integration step, ``0.1 / omega_max``."""
    from .propagation import max_frequency

    return STABILITY_FACTOR / max_frequency(profile)


def _check_dt(profile: CouplingProfile, dt: float) -> None:
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    limit = max_step(profile)
    if dt > limit * (1 + 1e-12):
        raise StepSizeError(f"dt={dt} exceeds stability guard {limit:.6g}")


def run_chain(state: ChainState, dt: float, n_steps: int) -> ChainState:
    """Advance ``n_steps`` velocity-Verlet steps in one kernel call."""
    _check_dt(state.profile, dt)
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    u = state.u.copy()
    v = state.v.copy()
    p = state.profile
    kernels.verlet_run(u, v, p.distances, p.stiffnesses, p.mass, float(dt), int(n_steps))
    return ChainState(u, v, p, state.t + n_steps * dt)


def step_chain(state: ChainState, dt: float) -> ChainState:
    return run_chain(state, dt, 1)


def excite(state: ChainState, site: int, impulse: float) -> ChainState:
    """Velocity kick ``impulse`` at ``site``."""
    if not 0 <= site < state.n:
        raise ConfigurationError(f"site {site} out of range [0, {state.n})")
    v = state.v.copy()
    v[site] += impulse
    return replace(state, v=v)


def potential_energy(state: ChainState) -> float:
    u = state.u
    pe = 0.0
    for d, k in state.profile.hops:
        pe += 0.5 * k * float(np.sum((np.roll(u, -d) - u) ** 2))
    return pe


def kinetic_energy(state: ChainState) -> float:
    return 0.5 * state.profile.mass * float(np.sum(state.v ** 2))


def total_energy(state: ChainState) -> float:
    return kinetic_energy(state) + potential_energy(state)


# ---------------------------------------------------------------------------
# reversible cellular automaton


def rule_table(rule, radius: int) -> np.ndarray:
    """Lookup table of a neighbourhood rule.

    ``rule`` is either a callable taking a tuple of ``2r+1`` bits (leftmost
    cell first) or an integer rule code whose bit ``i`` is the output for
    neighbourhood index ``i`` (leftmost cell most significant).
    """
    width = 2 * radius + 1
    size = 1 << width
    if isinstance(rule, np.ndarray):
        table = np.asarray(rule, dtype=np.uint8)
        if table.shape != (size,):
            raise ConfigurationError(f"rule table must have {size} entries")
        return table & 1
    if callable(rule):
        table = np.empty(size, dtype=np.uint8)
        for idx in range(size):
            bits = tuple((idx >> (width - 1 - j)) & 1 for j in range(width))
            table[idx] = 1 if rule(bits) else 0
        return table
    code = int(rule)
    if code < 0 or code >= 1 << size:
        raise ConfigurationError(f"rule code {code} out of range for radius {radius}")
    return np.array([(code >> idx) & 1 for idx in range(size)], dtype=np.uint8)


def or_rule(bits: Sequence[int]) -> int:
    return int(any(bits))


@dataclass(frozen=True, eq=False)
class CaState:
    current: np.ndarray
    previous: np.ndarray
    radius: int
    table: np.ndarray
    tick: int = 0

    def __post_init__(self):
        cur = np.array(self.current, dtype=np.uint8) & 1
        prev = np.array(self.previous, dtype=np.uint8) & 1
        if cur.ndim != 1 or cur.shape != prev.shape:
            raise ConfigurationError("layers must be 1-d and of equal width")
        if self.radius < 1:
            raise ConfigurationError("radius must be positive")
        if cur.shape[0] <= 2 * self.radius:
            raise ConfigurationError(f"width {cur.shape[0]} too small for radius {self.radius}")
        if self.table.shape != (1 << (2 * self.radius + 1),):
            raise ConfigurationError("rule table does not match radius")
        if self.table[0] != 0:
            raise ConfigurationError("rule must map the all-zero neighbourhood to 0")
        for a in (cur, prev):
            a.flags.writeable = False
        object.__setattr__(self, "current", cur)
        object.__setattr__(self, "previous", prev)

    @property
    def n(self) -> int:
        return self.current.shape[0]

    def same_layers(self, other: "CaState") -> bool:
        return bool(np.array_equal(self.current, other.current)
                    and np.array_equal(self.previous, other.previous))


def new_ca(n: int, radius: int, rule, seed: Iterable[int] | None = None) -> CaState:
    if radius < 1:
        raise ConfigurationError("radius must be positive")
    if n <= 2 * radius:
        raise ConfigurationError(f"width {n} too small for radius {radius} (need n > {2 * radius})")
    cur = np.zeros(n, dtype=np.uint8)
    if seed is not None:
        bits = np.asarray(list(seed), dtype=np.uint8)
        if bits.shape[0] != n:
            raise ConfigurationError(f"seed has {bits.shape[0]} bits, expected {n}")
        cur[:] = bits & 1
    table = rule_table(rule, radius)
    table.flags.writeable = False
    return CaState(cur, np.zeros(n, dtype=np.uint8), radius, table, 0)


def run_ca(state: CaState, n_steps: int) -> CaState:
    cur = state.current.copy()
    prev = state.previous.copy()
    kernels.ca_run(cur, prev, int(state.radius), state.table, int(n_steps))
    return replace(state, current=cur, previous=prev, tick=state.tick + n_steps)


def step_ca(state: CaState) -> CaState:
    """s(t+1) = rule(neighbourhood of s(t)) XOR s(t-1)."""
    return run_ca(state, 1)


def swap_layers(state: CaState) -> CaState:
    """Exchange current and previous layer; stepping afterwards runs time backwards."""
    return replace(state, current=state.previous, previous=state.current)


def support(layer: np.ndarray, center: int) -> tuple[int, int] | None:
    """Extent ``(left, right)`` of the set bits, as signed offsets from ``center``.

    Offsets are taken on the periodic ring, folded into ``[-n/2, n/2)``.
    """
    idx = np.flatnonzero(layer)
    if idx.size == 0:
        return None
    n = layer.shape[0]
    off = (idx - center + n // 2) % n - n // 2
    return int(off.min()), int(off.max())


# ---------------------------------------------------------------------------
# trajectory histories and CSV export


@dataclass(frozen=True, eq=False)
class ChainHistory:
    """Chain snapshots recorded once per tick.

    ``u`` and ``v`` have shape ``(ticks, sites)``; ``times`` holds the medium
    time of each row. ``sources`` lists the excited sites (0-based).
    """

    ticks: np.ndarray
    times: np.ndarray
    u: np.ndarray
    v: np.ndarray
    spacing: float = 1.0
    sources: tuple[int, ...] = field(default_factory=tuple)

    @property
    def n_sites(self) -> int:
        return self.u.shape[1]


def record_chain(state: ChainState, dt: float, substeps: int, n_ticks: int,
                 sources: Sequence[int] = ()) -> ChainHistory:
    """Record ``n_ticks`` rows, integrating ``substeps`` Verlet steps between rows."""
    us = np.empty((n_ticks, state.n))
    vs = np.empty((n_ticks, state.n))
    times = np.empty(n_ticks)
    for t in range(n_ticks):
        if t:
            state = run_chain(state, dt, substeps)
        us[t] = state.u
        vs[t] = state.v
        times[t] = state.t
    return ChainHistory(np.arange(n_ticks), times, us, vs, state.profile.spacing, tuple(sources))


def record_ca(state: CaState, n_ticks: int) -> np.ndarray:
    """Current layer at each of ``n_ticks`` ticks, shape ``(n_ticks, n)``."""
    out = np.empty((n_ticks, state.n), dtype=np.uint8)
    for t in range(n_ticks):
        if t:
            state = step_ca(state)
        out[t] = state.current
    return out


def fmt(x: float) -> str:
    """Deterministic float text, 17 significant digits."""
    return format(float(x), ".17g")


def chain_history_csv(history: ChainHistory, out: io.TextIOBase | None = None) -> str:
    """``tick,site,u,v`` rows, tick-major and site-minor."""
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tick", "site", "u", "v"])
    for ti, tick in enumerate(history.ticks):
        for site in range(history.n_sites):
            w.writerow([int(tick), site, fmt(history.u[ti, site]), fmt(history.v[ti, site])])
    return buf.getvalue() if out is None else ""


def ca_history_csv(layers: np.ndarray, first_tick: int = 0, out: io.TextIOBase | None = None) -> str:
    """``tick,site,bit`` rows, tick-major and site-minor."""
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tick", "site", "bit"])
    for ti in range(layers.shape[0]):
        for site in range(layers.shape[1]):
            w.writerow([first_tick + ti, site, int(layers[ti, site])])
    return buf.getvalue() if out is None else ""

