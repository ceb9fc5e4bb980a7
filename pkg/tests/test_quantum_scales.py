import itertools
import math
from collections import deque
from fractions import Fraction

import numpy as np
import pytest

from spacetimelab.quantum_scales import (
    CAESIUM_HZ, CAYLEY, CHSH_OPTIMAL, HAMMING, KENDALL, LIGHT_SPEED, PSI0, PSI1, PairCounts,
    Permutation, Qubit, TickClock, apply_not, borel_block_test, chsh, chsh_expected,
    chsh_expected_stderr, correlation, local_deterministic_chsh, metre_in_ticks,
    no_signaling_check, permutation_distance, philox, seconds_to_ticks, singlet_outcomes,
    singlet_probabilities, singlet_sample, symmetric_group, ticks_to_seconds,
)


def born_oracle(theta_a, theta_b):
    """Joint outcome probabilities from the singlet state vector."""
    up, dn = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    psi = (np.kron(up, dn) - np.kron(dn, up)) / math.sqrt(2)

    def basis(th):
        return {1: np.array([math.cos(th / 2), math.sin(th / 2)]),
                -1: np.array([-math.sin(th / 2), math.cos(th / 2)])}

    ea, eb = basis(theta_a), basis(theta_b)
    return [abs(np.kron(ea[sa], eb[sb]) @ psi) ** 2 for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1))]


def bfs_distances(n, generators):
    """Word-length distance from the identity in the Cayley graph."""
    ident = tuple(range(n))
    dist = {ident: 0}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for i, j in generators:
            q = list(p)
            q[i], q[j] = q[j], q[i]
            q = tuple(q)
            if q not in dist:
                dist[q] = dist[p] + 1
                queue.append(q)
    return dist


class TestClock:
    def test_not_gate(self):
        assert apply_not(PSI1) == PSI0
        q = Qubit(0.6, 0.8j)
        assert apply_not(apply_not(q)) == q
        h = Qubit(1 / math.sqrt(2), 1 / math.sqrt(2))
        assert apply_not(h) == h

    def test_normalisation(self, rng):
        for _ in range(100):
            z = rng.normal(size=4)
            a, b = complex(z[0], z[1]), complex(z[2], z[3])
            n = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
            q = apply_not(Qubit(a / n, b / n))
            assert abs(q.norm - 1) < 1e-12
        with pytest.raises(ValueError):
            Qubit(1, 1)

    def test_clock_ticks(self):
        c = TickClock()
        q = PSI0
        for _ in range(5):
            q = apply_not(q, c)
        assert c.count == 5 and q == PSI1
        assert c.seconds == Fraction(5, CAESIUM_HZ)

    def test_si_second(self):
        assert ticks_to_seconds(9_192_631_770) == 1
        assert ticks_to_seconds(0) == 0
        assert seconds_to_ticks(1) == 9_192_631_770
        assert seconds_to_ticks(Fraction(1, 2)) == 4_596_315_885
        with pytest.raises(ValueError):
            ticks_to_seconds(-1)
        with pytest.raises(ValueError):
            seconds_to_ticks(-0.5)

    @pytest.mark.parametrize("ticks", [0, 1, 31, 10 ** 12 + 7, 9_192_631_771])
    def test_round_trip(self, ticks):
        assert seconds_to_ticks(ticks_to_seconds(ticks)) == ticks

    def test_metre(self):
        ratio, rounded = metre_in_ticks()
        assert ratio * LIGHT_SPEED == CAESIUM_HZ
        assert rounded == 31
        assert float(ratio) == pytest.approx(30.66331898849837, rel=1e-15)


class TestPermutations:
    def test_basics(self):
        p = Permutation((2, 0, 1))
        assert p * p.inverse() == Permutation.identity(3)
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))

    def test_examples(self):
        ident = Permutation.identity(5)
        swap = Permutation((0, 3, 2, 1, 4))
        for m in (CAYLEY, KENDALL, HAMMING):
            assert permutation_distance(swap, swap, m) == 0
        assert permutation_distance(ident, swap, CAYLEY) == 1
        assert permutation_distance(Permutation.identity(3), Permutation((2, 1, 0)), KENDALL) == 3
        with pytest.raises(ValueError):
            permutation_distance(ident, Permutation.identity(4))

    def test_against_cayley_graphs(self):
        n = 5
        all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        adjacent = [(i, i + 1) for i in range(n - 1)]
        d_cay = bfs_distances(n, all_pairs)
        d_ken = bfs_distances(n, adjacent)
        ident = Permutation.identity(n)
        for img in itertools.permutations(range(n)):
            p = Permutation(img)
            assert permutation_distance(p, ident, CAYLEY) == d_cay[img]
            assert permutation_distance(p, ident, KENDALL) == d_ken[img]

    def test_kendall_large_vs_quadratic(self, rng):
        img = rng.permutation(300)
        brute = sum(1 for i in range(300) for j in range(i + 1, 300) if img[i] > img[j])
        assert Permutation(img).inversions() == brute

    @pytest.mark.parametrize("metric", [CAYLEY, KENDALL, HAMMING])
    def test_metric_axioms_s4(self, metric):
        group = symmetric_group(4)
        d = {(p.image, q.image): permutation_distance(p, q, metric) for p in group for q in group}
        for p in group:
            for q in group:
                dpq = d[p.image, q.image]
                assert dpq >= 0
                assert (dpq == 0) == (p == q)
                assert dpq == d[q.image, p.image]
                for r in group:
                    assert d[p.image, r.image] <= dpq + d[q.image, r.image]


class TestSinglet:
    @pytest.mark.parametrize("da", [0.0, 0.3, math.pi / 2, 2.0, math.pi])
    def test_probabilities_match_born_rule(self, da):
        assert singlet_probabilities(0.4 + da, 0.4) == pytest.approx(born_oracle(0.4 + da, 0.4), abs=1e-15)

    def test_perfect_anticorrelation(self):
        c = singlet_sample(0.7, 0.7, 100_000, 1)
        assert c.pp == 0 and c.mm == 0 and c.total == 100_000
        assert correlation(c) == -1.0

    def test_orthogonal_cells(self):
        n = 1_000_000
        c = singlet_sample(0.0, math.pi / 2, n, 3)
        sigma = math.sqrt(n * 3 / 16)
        for cell in (c.pp, c.pm, c.mp, c.mm):
            assert abs(cell - n / 4) < 4 * sigma
        assert abs(correlation(c)) < 4 / math.sqrt(n)

    def test_marginals(self):
        n = 200_000
        for k, da in enumerate(np.linspace(0, math.pi, 9)):
            c = singlet_sample(da, 0.0, n, k)
            bound = 4 * math.sqrt(0.25 / n)
            assert abs(c.a_plus_fraction - 0.5) < bound
            assert abs(c.b_plus_fraction - 0.5) < bound

    def test_deterministic(self):
        assert singlet_sample(0.1, 0.9, 1000, 42) == singlet_sample(0.1, 0.9, 1000, 42)
        a1, b1 = singlet_outcomes(0.1, 0.9, 1000, 42)
        a2, _ = singlet_outcomes(0.1, 0.9, 1000, 43)
        assert not np.array_equal(a1, a2)

    def test_errors(self):
        with pytest.raises(ValueError):
            singlet_sample(0, 0, 0, 1)
        with pytest.raises(ValueError):
            correlation(PairCounts(0, 0, 0, 0, 0, 0))

    def test_correlation_all_anti(self):
        assert correlation(PairCounts(0, 0, 0, 10, 0, 0)) == -1

    @pytest.mark.parametrize("n", [10_000, 100_000, 1_000_000])
    def test_convergence_rate(self, n):
        for k, da in enumerate(np.linspace(0, math.pi, 9)):
            e = correlation(singlet_sample(da, 0.0, n, 100 + k))
            sigma = math.sqrt(max(1 - math.cos(da) ** 2, 0.0) / n)
            assert abs(e + math.cos(da)) <= 4 * sigma + 1e-12


class TestChsh:
    def test_optimal(self):
        r = chsh(CHSH_OPTIMAL, 1_000_000, 11)
        assert r.s == pytest.approx(2 * math.sqrt(2), abs=0.01)
        assert chsh_expected() == pytest.approx(2 * math.sqrt(2), abs=1e-15)

    def test_aligned_settings(self):
        settings = (0.2, 0.2 + math.pi / 2, 0.2, 0.2 + math.pi / 2)
        assert chsh_expected(settings) == pytest.approx(2.0, abs=1e-12)
        r = chsh(settings, 200_000, 5)
        assert abs(r.s - 2.0) <= 5 * chsh_expected_stderr(settings, 200_000)

    def test_tsirelson(self, rng):
        n = 50_000
        for i in range(10):
            s = tuple(rng.uniform(0, 2 * math.pi, 4))
            r = chsh(s, n, i)
            assert r.s <= 2 * math.sqrt(2) + 5 * chsh_expected_stderr(s, n)

    def test_local_strategies(self):
        table = local_deterministic_chsh()
        assert len(table) == 16
        assert max(s for *_, s in table) == 2
        # independent brute force: every +-1 assignment of the four outcomes
        for a0, a1, b0, b1 in itertools.product((1, -1), repeat=4):
            assert abs(a0 * b0 - a0 * b1 + a1 * b0 + a1 * b1) <= 2

    def test_no_signaling(self):
        r = no_signaling_check(0.3, 0.0, 1.2, 1_000_000, 8)
        assert r.within_bound
        assert r.delta != 0.0
        same = no_signaling_check(0.3, 0.5, 0.5, 10_000, 8)
        assert same.delta == 0.0

    def test_no_signaling_sweep(self, rng):
        for i in range(10):
            a, b1, b2 = rng.uniform(0, math.pi, 3)
            assert no_signaling_check(a, b1, b2, 200_000, i).within_bound

    def test_no_signaling_scaling(self):
        # mean delta over repeats shrinks like 1/sqrt(n)
        means = []
        for n in (1_000, 100_000):
            means.append(np.mean([no_signaling_check(0.0, 0.4, 1.9, n, s).delta for s in range(40)]))
        assert means[1] < means[0] / 4


class TestBorel:
    def test_alternating_fails_k2(self):
        bits = np.tile([0, 1], 500)
        rep = borel_block_test(bits, 2)
        assert rep.passed(1) and not rep.passed(2)
        row = next(r for r in rep.rows if r.block == "11")
        assert row.freq == 0.0

    def test_prng_passes(self):
        bits = philox(2024).integers(0, 2, 1_000_000)
        assert borel_block_test(bits, 3).passed()

    def test_singlet_stream(self):
        a, b = singlet_outcomes(0.0, math.pi / 2, 100_000, 77)
        assert borel_block_test(a, 1).passed()
        assert borel_block_test(b, 1).passed()

    def test_too_short(self):
        with pytest.raises(ValueError):
            borel_block_test([0, 1] * 100, 2)
