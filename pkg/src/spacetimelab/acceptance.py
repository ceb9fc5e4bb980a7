"""Canned exit-criterion checks, shared by the ``acceptance`` CLI experiment and the test suite.

Each ``criterion_N`` returns a :class:`CriterionResult` holding named
checks (value, threshold, pass) plus wall-clock runtime against its budget.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import causal, frames, propagation, quantum_scales as qs, substrate

SEED = 20131


@dataclass
class Check:
    name: str
    value: float
    threshold: str
    passed: bool


@dataclass
class CriterionResult:
    number: int
    title: str
    budget_s: float | None
    checks: list[Check] = field(default_factory=list)
    runtime_s: float = 0.0

    @property
    def within_budget(self) -> bool:
        return self.budget_s is None or self.runtime_s < self.budget_s

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and self.within_budget

    def add(self, name: str, value, threshold: str, passed: bool) -> None:
        self.checks.append(Check(name, float(value), threshold, bool(passed)))

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [c.name for c in self.checks if not c.passed]
        if not self.within_budget:
            failed.append(f"runtime {self.runtime_s:.3g}s >= {self.budget_s}s")
        extra = f" [failed: {', '.join(failed)}]" if failed else ""
        return f"criterion {self.number:2d} {status} {self.title} ({self.runtime_s:.3g}s){extra}"


# Excited site per tick for c = 1..6 over 7 array sites.
TABLE1_SITES = {
    1: (1, 2, 3, 4, 5, 6, 7),
    2: (1, 3, 5, 7),
    3: (1, 4, 7),
    4: (1, 5),
    5: (1, 6),
    6: (1, 7),
}


def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "array schedule table", 1e-3)
    t0 = time.perf_counter()
    scheds = {c: propagation.table1_schedule(c, 7) for c in range(1, 7)}
    res.runtime_s = time.perf_counter() - t0
    for c, s in scheds.items():
        expect = tuple((t, site) for t, site in enumerate(TABLE1_SITES[c]))
        res.add(f"c={c} pattern", int(s.entries == expect), "bit-exact", s.entries == expect)
    return res


def harmonic_front(hop: int, n_sites: int = 4000, kappa: float = 1.0, mass: float = 1.0,
                   spacing: float = 1.0, reach: float = 1500.0) -> propagation.FrontFit:
    """Kick the centre of a hop-only chain and fit the front over ``reach`` lattice units."""
    p = substrate.CouplingProfile.single(hop, kappa, mass, spacing)
    tick = math.sqrt(mass / kappa)
    substeps = math.ceil(tick / substrate.max_step(p) - 1e-9)
    dt = tick / substeps
    duration = reach * spacing / propagation.max_signal_speed(p)
    hist = propagation.kick_response(p, n_sites, duration, dt, substeps=substeps)
    return propagation.estimate_front_speed(hist)


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "harmonic front speeds", 30.0)
    t0 = time.perf_counter()
    for n in range(1, 7):
        analytic = propagation.max_signal_speed(substrate.CouplingProfile.single(n))
        res.add(f"hop={n} analytic", analytic, f"== {n}", analytic == n)
        fit = harmonic_front(n, reach=1500.0)
        rel = abs(fit.speed - n) / n
        res.add(f"hop={n} simulated {fit.speed:.4f}", rel, "< 0.05 rel", rel < 0.05)
    res.runtime_s = time.perf_counter() - t0
    return res


IRRATIONAL_PROFILE = substrate.CouplingProfile(((1, 1.0), (2, 2 ** -0.5)))


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "non-discretization", 1.0)
    t0 = time.perf_counter()
    propagation.max_signal_speed.cache_clear()
    s = propagation.max_signal_speed(IRRATIONAL_PROFILE)
    base = propagation.max_signal_speed(substrate.CouplingProfile.single(1))
    gap = abs(s / base - round(s / base)) * base
    res.runtime_s = time.perf_counter() - t0
    res.add(f"max speed {s:.6f} distance to integer multiple", gap, "> 1e-3", gap > 1e-3)
    return res


def criterion_4() -> CriterionResult:
    res = CriterionResult(4, "energy and reversibility", 20.0)
    t0 = time.perf_counter()
    p = substrate.CouplingProfile.single(1)
    u = np.zeros(100)
    u[0] = 1.0
    s = substrate.ChainState(u, np.zeros(100), p)
    e0 = substrate.total_energy(s)
    worst = 0.0
    # omega_max dt = 2e-3: Verlet's O((omega dt)^2) energy oscillation stays below 1e-6
    for _ in range(100):
        s = substrate.run_chain(s, 1e-3, 100)
        worst = max(worst, abs(substrate.total_energy(s) - e0) / e0)
    res.add("energy drift over 1e4 steps", worst, "< 1e-6 rel", worst < 1e-6)

    rng = np.random.Generator(np.random.Philox(SEED))
    p2 = substrate.CouplingProfile(((1, 1.0), (2, 0.4)))
    s0 = substrate.ChainState(rng.normal(size=128), rng.normal(size=128), p2)
    dt = substrate.max_step(p2)
    fwd = substrate.run_chain(s0, dt, 10_000)
    back = substrate.run_chain(substrate.ChainState(fwd.u, -fwd.v, p2), dt, 10_000)
    rms = float(np.sqrt(np.mean((back.u - s0.u) ** 2)))
    res.add("Verlet time reversal RMS", rms, "< 1e-8", rms < 1e-8)
    dp = abs(fwd.momentum() - s0.momentum())
    res.add("momentum change over 1e4 steps", dp, "< 1e-12", dp < 1e-12)

    exact = 0
    for _ in range(1000):
        n = int(rng.integers(8, 64))
        r = int(rng.integers(1, 4))
        if n <= 2 * r:
            n = 2 * r + 1
        table = rng.integers(0, 2, size=1 << (2 * r + 1)).astype(np.uint8)
        table[0] = 0
        st = substrate.CaState(rng.integers(0, 2, n), rng.integers(0, 2, n), r, table)
        back = substrate.swap_layers(substrate.step_ca(substrate.swap_layers(substrate.step_ca(st))))
        exact += back.same_layers(st)
    res.add("CA bit-exact inversions of 1000", exact, "== 1000", exact == 1000)
    res.runtime_s = time.perf_counter() - t0
    return res


V_FRACTIONS = [round(0.1 * i, 1) for i in range(-9, 10)]
C_VALUES = (0.5, 1.0, 2.0, 299_792_458.0)


def _rel_entry_error(fit: np.ndarray, exact: np.ndarray) -> float:
    scale = np.abs(exact).max()
    denom = np.where(exact != 0, np.abs(exact), scale)
    return float((np.abs(fit - exact) / denom).max())


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "emergent Lorentz", 5.0)
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(SEED + 5))
    worst = 0.0
    worst_off = 0.0
    for c in C_VALUES:
        ev = frames.random_events(20, rng, c)
        for fa in V_FRACTIONS:
            for fb in V_FRACTIONS:
                a, b = frames.ObserverFrame(fa * c, c), frames.ObserverFrame(fb * c, c)
                fit = frames.fit_transformation(ev, a, b)
                exact = frames.lorentz(frames.compose_velocity(fa * c, fb * c, c), c).matrix
                worst = max(worst, _rel_entry_error(fit.matrix, exact))
                worst_off = max(worst_off, float(np.abs(fit.offset).max()))
    res.add("max entrywise relative error", worst, "<= 1e-6", worst <= 1e-6)
    res.add("max offset (box units)", worst_off, "<= 1e-6", worst_off <= 1e-6)
    tau, xi = frames.radar_coordinates(frames.Event(0.0, 1.0), frames.ObserverFrame(0.6))
    err = max(abs(tau + 0.75), abs(xi - 1.25))
    res.add("worked example (-0.75, 1.25)", err, "<= 1e-12", err <= 1e-12)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_6() -> CriterionResult:
    res = CriterionResult(6, "velocity composition", 1.0)
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(SEED + 6))
    fit = frames.fit_transformation(frames.random_events(20, rng), frames.ObserverFrame(0.5), frames.ObserverFrame(0.8))
    w = -fit.matrix[0, 1] / fit.matrix[0, 0]
    res.runtime_s = time.perf_counter() - t0
    res.add(f"fitted relative velocity {w:.12f}", abs(w - 0.5), "<= 1e-9", abs(w - 0.5) <= 1e-9)
    return res


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "causal order", 60.0)
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.Philox(SEED + 7))
    violations = 0
    for _ in range(1000):
        m = causal.random_similarity(rng)
        violations += len(causal.preserves_order(m, frames.random_events(100, rng)).violations)
    res.add("violations over 1000 similarity maps x 100 events", violations, "== 0", violations == 0)

    found = 0
    for i in range(50):
        m = causal.random_quadratic(rng, min_amplitude=0.05)
        found += causal.find_violation(m, n_trials=10_000, seed=SEED + i) is not None
    res.add("quadratic maps falsified of 50", found, ">= 99%", found >= 0.99 * 50)

    ev = frames.random_events(200, rng)
    t = np.array([e.t for e in ev])
    x = np.array([e.x for e in ev])
    bad = 0
    for rel in (causal.CHRONOLOGICAL, causal.CAUSAL):
        m = causal.precedence_matrix(t, x, causal.CausalConfig(relation=rel))
        bad += int(m.diagonal().sum())
        two = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        bad += int((two & ~m).sum())
    res.add("partial-order axiom failures on 200-event triples", bad, "== 0", bad == 0)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "SI anchors", 1e-3)
    t0 = time.perf_counter()
    one = qs.ticks_to_seconds(9_192_631_770)
    back = qs.seconds_to_ticks(1)
    ratio, rounded = qs.metre_in_ticks()
    res.runtime_s = time.perf_counter() - t0
    res.add("9192631770 ticks -> s", float(one), "== 1 exactly", one == 1)
    res.add("1 s -> ticks", back, "== 9192631770", back == 9_192_631_770)
    four = round(float(ratio), 4)
    res.add(f"metre ratio to 4 d.p. ({float(ratio):.6f})", four, "== 30.6632", four == 30.6632)
    res.add("metre ratio rounded", rounded, "== 31", rounded == 31)
    return res


def criterion_9() -> CriterionResult:
    res = CriterionResult(9, "Bell statistics", 30.0)
    t0 = time.perf_counter()
    n = 1_000_000
    worst_e = 0.0
    worst_m = 0.0
    for i in range(9):
        d = i * math.pi / 8
        c = qs.singlet_sample(d, 0.0, n, SEED + i)
        sigma = math.sqrt(max(1 - math.cos(d) ** 2, 0.0) / n)
        z = abs(qs.correlation(c) + math.cos(d))
        worst_e = max(worst_e, z / sigma if sigma > 0 else (0.0 if z == 0 else math.inf))
        sm = math.sqrt(0.25 / n)
        worst_m = max(worst_m, abs(c.a_plus_fraction - 0.5) / sm, abs(c.b_plus_fraction - 0.5) / sm)
    res.add("max |E + cos| in sigma units", worst_e, "<= 4", worst_e <= 4)
    res.add("max marginal deviation in sigma units", worst_m, "<= 4", worst_m <= 4)
    s = qs.chsh(qs.CHSH_OPTIMAL, n, SEED).s
    res.add(f"CHSH S={s:.5f}", abs(s - 2 * math.sqrt(2)), "<= 0.01", abs(s - 2 * math.sqrt(2)) <= 0.01)
    local = max(v for *_, v in qs.local_deterministic_chsh())
    res.add("max S over 16 local strategies", local, "<= 2", local <= 2)
    rng = np.random.Generator(np.random.Philox(SEED + 9))
    worst_ns = 0.0
    for i in range(10):
        a, b1, b2 = rng.uniform(0, math.pi, 3)
        r = qs.no_signaling_check(a, b1, b2, n, SEED + i)
        worst_ns = max(worst_ns, r.delta / (r.bound / 4))
    res.add("max no-signaling delta in sigma units", worst_ns, "< 4", worst_ns < 4)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "permutation metrics", 5.0)
    t0 = time.perf_counter()
    group = qs.symmetric_group(4)
    for metric in qs.METRICS:
        d = {(p.image, q.image): qs.permutation_distance(p, q, metric) for p in group for q in group}
        bad = 0
        for p in group:
            for q in group:
                dpq = d[p.image, q.image]
                bad += dpq < 0 or (dpq == 0) != (p == q) or dpq != d[q.image, p.image]
                for r in group:
                    bad += d[p.image, r.image] > dpq + d[q.image, r.image]
        res.add(f"{metric} axiom failures on S4", bad, "== 0", bad == 0)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_11() -> CriterionResult:
    res = CriterionResult(11, "Borel blocks", 2.0)
    t0 = time.perf_counter()
    bits = qs.philox(SEED).integers(0, 2, 1_000_000)
    rep = qs.borel_block_test(bits, 3)
    for k, ok in rep.verdicts().items():
        res.add(f"PRNG bits k={k}", int(ok), "pass", ok)
    alt = qs.borel_block_test(np.tile(np.array([0, 1], dtype=np.uint8), 500_000), 2)
    res.add("alternating sequence k=2", int(alt.passed(2)), "fail", not alt.passed(2))
    res.runtime_s = time.perf_counter() - t0
    return res


DETERMINISM_CONFIGS = {
    "dispersion": {"hops": "1:1,2:0.5"},
    "harmonics": {"hop": "2", "n_sites": "600", "reach": "200"},
    "phased-array": {"c_mult": "1,2,3,4,5,6", "simulate": "true", "chain_sites": "400", "n_ticks": "60"},
    "frames": {"vB": "0.6"},
    "causal-check": {"map": "quadratic", "amplitude": "0.1"},
    "bell": {"theta_a": "0", "theta_b": "0.785398", "n": "100000", "borel_k": "2"},
    "clock": {},
    "perm-dist": {"p": "2,0,1,3", "q": "0,1,2,3"},
    "ca": {"n": "41", "steps": "20", "init": "random"},
}


def criterion_12() -> CriterionResult:
    from . import cli

    res = CriterionResult(12, "determinism", None)
    t0 = time.perf_counter()
    for name, params in DETERMINISM_CONFIGS.items():
        outputs = []
        for _ in range(2):
            with tempfile.TemporaryDirectory() as tmp:
                cli.run(cli.RunConfig(name, params, 7), quiet=True, dest=Path(tmp))
                outputs.append({p.name: p.read_bytes() for p in sorted(Path(tmp).iterdir())})
        same = bool(outputs[0]) and outputs[0] == outputs[1]
        res.add(f"{name} byte-identical ({len(outputs[0])} files)", int(same), "identical", same)
    res.runtime_s = time.perf_counter() - t0
    return res


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criteria(which=None) -> list[CriterionResult]:
    nums = sorted(CRITERIA) if which is None else list(which)
    return [CRITERIA[i]() for i in nums]
