"""Quantum units of time and length, permutation metrics, and singlet-pair statistics.

Angles are radians throughout. Outcome ``+`` is encoded as bit 1, ``-`` as 0.
Sampling uses the counter-based Philox generator so every run is a pure
function of its parameters and seed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

CAESIUM_HZ = 9_192_631_770
LIGHT_SPEED = 299_792_458

CAYLEY = "cayley"
KENDALL = "kendall"
HAMMING = "hamming"
METRICS = (CAYLEY, KENDALL, HAMMING)


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFF_FFFF_FFFF_FFFF))


# ---------------------------------------------------------------------------
# not-gate clock


@dataclass(frozen=True)
class Qubit:
    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"qubit not normalised: |a|^2 + |b|^2 = {norm}")

    @property
    def norm(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


PSI0 = Qubit(0, 1)
PSI1 = Qubit(1, 0)


class TickClock:
    """Counts not-gate transitions; 9 192 631 770 of them make one second."""

    ticks_per_second = CAESIUM_HZ

    def __init__(self, count: int = 0):
        if count < 0:
            raise ValueError("tick count must be nonnegative")
        self.count = int(count)

    def tick(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("clock cannot run backwards")
        self.count += n

    @property
    def seconds(self) -> Fraction:
        return ticks_to_seconds(self.count)

    def __repr__(self):
        return f"TickClock(count={self.count})"


def apply_not(q: Qubit, clock: TickClock | None = None) -> Qubit:
    """Apply X = [[0, 1], [1, 0]]; each application is one clock tick."""
    if clock is not None:
        clock.tick()
    return Qubit(q.beta, q.alpha)


def ticks_to_seconds(ticks: int) -> Fraction:
    if ticks < 0:
        raise ValueError("tick count must be nonnegative")
    return Fraction(int(ticks), CAESIUM_HZ)


def seconds_to_ticks(seconds) -> int:
    """Nearest whole number of transitions in ``seconds`` (exact for rationals)."""
    s = Fraction(seconds) if not isinstance(seconds, float) else Fraction(str(seconds))
    if s < 0:
        raise ValueError("duration must be nonnegative")
    return round(s * CAESIUM_HZ)


def metre_in_ticks() -> tuple[Fraction, int]:
    """Transitions during the light travel time of one metre, exact and rounded."""
    r = Fraction(CAESIUM_HZ, LIGHT_SPEED)
    return r, round(r)


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(i) for i in self.image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"{img} is not a permutation of 0..{len(img) - 1}")
        object.__setattr__(self, "image", img)

    def __len__(self):
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """(p * q)(i) = p(q(i))."""
        return Permutation(tuple(self.image[j] for j in other.image))

    def cycle_count(self) -> int:
        seen = [False] * len(self)
        cycles = 0
        for start in range(len(self)):
            if not seen[start]:
                cycles += 1
                j = start
                while not seen[j]:
                    seen[j] = True
                    j = self.image[j]
        return cycles

    def inversions(self) -> int:
        return _count_inversions(list(self.image))


def _count_inversions(a: list[int]) -> int:
    if len(a) < 2:
        return 0
    mid = len(a) // 2
    left, right = a[:mid], a[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    i = j = k = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            a[k] = left[i]
            i += 1
        else:
            a[k] = right[j]
            inv += len(left) - i
            j += 1
        k += 1
    a[k:] = left[i:] + right[j:]
    return inv


def permutation_distance(p: Permutation, q: Permutation, metric: str = CAYLEY) -> int:
    """Cayley: n minus cycles of p q^-1. Kendall tau: inversions of p q^-1. Hamming: differing positions."""
    if len(p) != len(q):
        raise ValueError(f"size mismatch: {len(p)} vs {len(q)}")
    metric = metric.lower()
    if metric == HAMMING:
        return sum(a != b for a, b in zip(p.image, q.image))
    r = p * q.inverse()
    if metric == CAYLEY:
        return len(r) - r.cycle_count()
    if metric in (KENDALL, "kendalltau", "kendall_tau"):
        return r.inversions()
    raise ValueError(f"unknown metric {metric!r}")


def symmetric_group(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(n))]


# ---------------------------------------------------------------------------
# singlet statistics


def singlet_probabilities(theta_a: float, theta_b: float) -> np.ndarray:
    """Born-rule cell probabilities ``[P(++), P(+-), P(-+), P(--)]``."""
    c = math.cos(theta_a - theta_b)
    same = (1 - c) / 4
    diff = (1 + c) / 4
    return np.array([same, diff, diff, same])


@dataclass(frozen=True)
class PairCounts:
    theta_a: float
    theta_b: float
    pp: int
    pm: int
    mp: int
    mm: int
    seed: int = 0

    def __post_init__(self):
        if min(self.pp, self.pm, self.mp, self.mm) < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.pp + self.pm + self.mp + self.mm

    @property
    def a_plus_fraction(self) -> float:
        return (self.pp + self.pm) / self.total

    @property
    def b_plus_fraction(self) -> float:
        return (self.pp + self.mp) / self.total


def singlet_outcomes(theta_a: float, theta_b: float, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``n`` joint outcomes as two bit arrays (1 = +), drawn from the four-cell distribution."""
    if n < 1:
        raise ValueError("need at least one sample")
    cdf = np.cumsum(singlet_probabilities(theta_a, theta_b))
    cdf[-1] = 1.0
    cell = np.searchsorted(cdf, philox(seed).random(n), side="right")
    a = (cell <= 1).astype(np.uint8)
    b = ((cell == 0) | (cell == 2)).astype(np.uint8)
    return a, b


def singlet_sample(theta_a: float, theta_b: float, n: int, seed: int) -> PairCounts:
    a, b = singlet_outcomes(theta_a, theta_b, n, seed)
    pp = int(np.sum(a & b))
    pm = int(np.sum(a & (1 - b)))
    mp = int(np.sum((1 - a) & b))
    return PairCounts(theta_a, theta_b, pp, pm, mp, n - pp - pm - mp, seed)


def correlation(c: PairCounts) -> float:
    if c.total <= 0:
        raise ValueError("empty counts")
    return (c.pp + c.mm - c.pm - c.mp) / c.total


def correlation_stderr(c: PairCounts) -> float:
    e = correlation(c)
    return math.sqrt(max(1 - e * e, 0.0) / c.total)


def expected_correlation(theta_a: float, theta_b: float) -> float:
    return -math.cos(theta_a - theta_b)


CHSH_OPTIMAL = (0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)


@dataclass(frozen=True)
class ChshResult:
    settings: tuple[float, float, float, float]
    correlations: tuple[float, float, float, float]  # E(a,b), E(a,b'), E(a',b), E(a',b')
    s: float
    stderr: float
    seed: int


def _chsh_combination(e_ab, e_abp, e_apb, e_apbp) -> float:
    return abs(e_ab - e_abp + e_apb + e_apbp)


def chsh(settings: Sequence[float] = CHSH_OPTIMAL, n: int = 1_000_000, seed: int = 0) -> ChshResult:
    """S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|; setting pair ``i`` uses seed ``seed ^ i``."""
    if n < 1:
        raise ValueError("need at least one sample per setting")
    a, ap, b, bp = settings
    pairs = ((a, b), (a, bp), (ap, b), (ap, bp))
    counts = [singlet_sample(x, y, n, seed ^ i) for i, (x, y) in enumerate(pairs)]
    es = tuple(correlation(c) for c in counts)
    err = math.sqrt(sum(correlation_stderr(c) ** 2 for c in counts))
    return ChshResult(tuple(settings), es, _chsh_combination(*es), err, seed)


def chsh_expected(settings: Sequence[float] = CHSH_OPTIMAL) -> float:
    a, ap, b, bp = settings
    e = expected_correlation
    return _chsh_combination(e(a, b), e(a, bp), e(ap, b), e(ap, bp))


def chsh_expected_stderr(settings: Sequence[float], n: int) -> float:
    a, ap, b, bp = settings
    pairs = ((a, b), (a, bp), (ap, b), (ap, bp))
    return math.sqrt(sum((1 - expected_correlation(x, y) ** 2) / n for x, y in pairs))


def local_deterministic_chsh() -> list[tuple[tuple[int, int], tuple[int, int], int]]:
    """S for every strategy assigning a fixed +-1 outcome to each local setting.

    Entries are ``((A(a), A(a')), (B(b), B(b')), S)``; 16 in total.
    """
    out = []
    for aa in itertools.product((1, -1), repeat=2):
        for bb in itertools.product((1, -1), repeat=2):
            s = abs(aa[0] * bb[0] - aa[0] * bb[1] + aa[1] * bb[0] + aa[1] * bb[1])
            out.append((aa, bb, s))
    return out


def setting_seed(seed: int, *angles: float) -> int:
    """64-bit seed keyed on the run seed and the exact bit patterns of the angles."""
    words = [int(seed) & 0xFFFF_FFFF_FFFF_FFFF]
    for th in angles:
        words.append(int(np.float64(th).view(np.uint64)))
    return int(np.random.SeedSequence(words).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class NoSignalingReport:
    theta_a: float
    theta_b1: float
    theta_b2: float
    n: int
    p1: float
    p2: float
    delta: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.delta < self.bound


def no_signaling_check(theta_a: float, theta_b1: float, theta_b2: float, n: int, seed: int) -> NoSignalingReport:
    """Compare A's + frequency under two settings of B.

    Each run is seeded from ``(seed, theta_a, theta_b)``, so equal settings
    reproduce the same stream and give delta 0 exactly.
    """
    c1 = singlet_sample(theta_a, theta_b1, n, setting_seed(seed, theta_a, theta_b1))
    c2 = singlet_sample(theta_a, theta_b2, n, setting_seed(seed, theta_a, theta_b2))
    p1, p2 = c1.a_plus_fraction, c2.a_plus_fraction
    return NoSignalingReport(theta_a, theta_b1, theta_b2, n, p1, p2, abs(p1 - p2), 4 * math.sqrt(0.25 / n))


# ---------------------------------------------------------------------------
# Borel normality


@dataclass(frozen=True)
class BlockRow:
    k: int
    block: str
    freq: float
    expected: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class BorelReport:
    rows: tuple[BlockRow, ...]

    def passed(self, k: int | None = None) -> bool:
        return all(r.passed for r in self.rows if k is None or r.k == k)

    def verdicts(self) -> dict[int, bool]:
        return {k: self.passed(k) for k in sorted({r.k for r in self.rows})}


def borel_block_test(bits, max_k: int) -> BorelReport:
    """Frequencies of every non-overlapping k-block, k = 1..max_k, against 2^-k at 4 sigma."""
    bits = np.asarray(bits, dtype=np.uint8)
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    if bits.size < (1 << max_k) * 100:
        raise ValueError(f"sequence of {bits.size} bits too short for k = {max_k}")
    rows = []
    for k in range(1, max_k + 1):
        m = bits.size // k
        blocks = bits[: m * k].reshape(m, k).astype(np.int64)
        codes = blocks @ (1 << np.arange(k - 1, -1, -1))
        freq = np.bincount(codes, minlength=1 << k) / m
        p = 2.0 ** -k
        tol = 4 * math.sqrt(p * (1 - p) / m)
        for code in range(1 << k):
            f = float(freq[code])
            rows.append(BlockRow(k, format(code, f"0{k}b"), f, p, tol, abs(f - p) <= tol))
    return BorelReport(tuple(rows))
