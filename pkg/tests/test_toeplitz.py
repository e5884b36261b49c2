"""Progression partition, Toeplitz building, interval analytics, entropy bound."""

import numpy as np
import pytest

from chowla_lab.numbergen import mobius_prefix
from chowla_lab.seqcore import SignSeq
from chowla_lab.toeplitz import (
    ToeplitzSpec,
    build_toeplitz,
    classify_initials,
    interval_analytics,
    toeplitz_correlation,
    toeplitz_entropy_lower_bound,
)


def brute_owner(q, N):
    """Set-based oracle: walk j upward, first unclaimed j opens A_j."""
    owner = {}
    for j in range(1, N + 1):
        if j in owner:
            continue
        owner[j] = j
        step = q**j
        pos = j + step
        while pos <= N:
            assert pos not in owner, (q, j, pos)
            owner[pos] = j
            pos += step
    return owner


class TestClassifyInitials:
    def test_hand_example_q3(self):
        t = classify_initials(3, 10)
        initials = [n for n in range(1, 11) if t.owner[n] == n]
        assert initials == [1, 2, 3, 5, 6, 8, 9]
        assert {n: int(t.owner[n]) for n in (4, 7, 10)} == {4: 1, 7: 1, 10: 1}

    def test_hand_example_q2(self):
        t = classify_initials(2, 6)
        non_initials = {n: int(t.owner[n]) for n in range(1, 7) if t.owner[n] != n}
        assert non_initials == {3: 1, 5: 1, 6: 2}

    @pytest.mark.parametrize("q", [2, 3, 5, 7])
    def test_matches_brute_oracle(self, q):
        N = 3000
        table = classify_initials(q, N)
        oracle = brute_owner(q, N)
        assert {n: int(table.owner[n]) for n in range(1, N + 1)} == oracle

    @pytest.mark.parametrize("q", [2, 3, 5, 10])
    def test_partition_and_density(self, q):
        N = 10**5
        table = classify_initials(q, N)
        owner = table.owner[1:]
        n = np.arange(1, N + 1, dtype=np.int64)
        # every position owned by an initial j with the right congruence
        assert np.all(owner >= 1)
        is_initial = table.is_initial()
        assert np.all(is_initial[owner - 1])
        non_init = owner != n
        step = np.ones(N, dtype=np.int64)
        for j in np.unique(owner[non_init]):
            members = n[owner == j]
            assert np.all((members - j) % q**j == 0)
            assert np.all(members >= j)
        # exact density bound at every prefix
        assert table.non_initial_density_ok()

    def test_validation(self):
        with pytest.raises(ValueError):
            classify_initials(1, 10)


class TestBuildToeplitz:
    def test_initial_positions_copy_reference(self):
        ref = SignSeq(np.random.default_rng(0).integers(-1, 2, size=2000))
        spec = ToeplitzSpec(q=3, z_ref=ref)
        table = classify_initials(3, 2000)
        t = build_toeplitz(spec, 2000, table)
        initial = table.is_initial()
        assert np.array_equal(t.values[initial], ref.values[:2000][initial])

    def test_q3_copies_first_term(self):
        ref = SignSeq(np.random.default_rng(1).integers(-1, 2, size=100))
        t = build_toeplitz(ToeplitzSpec(q=3, z_ref=ref), 100)
        assert t[4] == t[7] == t[10] == ref[1]

    def test_periodic_recurrence(self):
        # t(n) recurs along its owner progression with period q^owner
        q = 3
        N = 30_000
        ref = SignSeq(np.random.default_rng(2).integers(-1, 2, size=N))
        table = classify_initials(q, N)
        t = build_toeplitz(ToeplitzSpec(q=q, z_ref=ref), N, table)
        for n in range(1, 1001):
            j = int(table.owner[n])
            period = q**j
            for k in range(1, 6):
                if n + k * period > N:
                    break
                assert t[n + k * period] == t[n], (n, j, k)

    def test_reference_too_short(self):
        with pytest.raises(ValueError, match="reference length"):
            build_toeplitz(ToeplitzSpec(q=2, z_ref=SignSeq([1, 0])), 5)


class TestToeplitzCorrelation:
    def test_zero_reference(self):
        ref = SignSeq(np.zeros(1000, dtype=np.int8))
        cb = toeplitz_correlation(ToeplitzSpec(q=5, z_ref=ref), 1000)
        assert cb.value == 0.0
        assert cb.lower_bound == -2.0 / 4

    def test_full_support_reference(self):
        values = np.random.default_rng(3).integers(0, 2, size=20_000) * 2 - 1
        cb = toeplitz_correlation(ToeplitzSpec(q=10, z_ref=SignSeq(values)), 20_000)
        assert cb.value >= 1 - 2 / 9
        assert cb.holds

    def test_inequality_exact_on_random_sparse(self):
        for seed in range(5):
            ref = SignSeq(np.random.default_rng(seed).integers(-1, 2, size=5000))
            cb = toeplitz_correlation(ToeplitzSpec(q=4, z_ref=ref), 5000)
            assert cb.holds


class TestIntervalAnalytics:
    def test_exact_density_q3(self):
        spec = ToeplitzSpec(q=3, z_ref=SignSeq([0]))
        rep = interval_analytics(spec, m=4, ell=2, K=1000)
        assert rep.good_count == 1000
        assert rep.type1_count_observed == rep.type1_count_expected == 4
        assert rep.type1_fraction == 4 / 9
        assert rep.type1_counts_equal
        assert rep.masks_identical

    def test_q2_small_m(self):
        spec = ToeplitzSpec(q=2, z_ref=SignSeq([0]))
        rep = interval_analytics(spec, m=3, ell=1, K=500)
        # expected type-1 count: L * (1/q) = 1 of the last 2 positions
        assert rep.type1_count_expected == 1
        if rep.good_count:
            assert rep.type1_counts_equal

    def test_parameter_validation(self):
        spec = ToeplitzSpec(q=3, z_ref=SignSeq([0]))
        with pytest.raises(ValueError, match="ell < m"):
            interval_analytics(spec, m=2, ell=2, K=10)

    def test_deep_progressions_hit_every_qh_th_interval_once(self):
        # A_j* for initial j = m+h meets every q^h-th interval, one point each
        q, m, K = 2, 3, 200
        qm = q**m
        table = classify_initials(q, K * qm)
        n = np.arange(1, K * qm + 1, dtype=np.int64)
        owner = table.owner[1:]
        for j in (4, 5):  # initial for q=2 (3 is non-initial)
            members = n[(owner == j) & (n != j)]
            intervals = (members - 1) // qm
            assert np.all(np.diff(intervals) == q ** (j - m))
            assert np.unique(intervals).size == intervals.size


class TestEntropyLowerBound:
    def test_zero_reference_gives_zero(self):
        N = 100 * 3**4
        ref = SignSeq(np.zeros(N, dtype=np.int8))
        rep = toeplitz_entropy_lower_bound(ToeplitzSpec(q=3, z_ref=ref), 4, 2, 100)
        assert rep.distinct_blocks == 1
        assert rep.estimate == 0.0

    def test_mobius_reference_positive(self):
        K = 500
        ref = mobius_prefix(K * 5**4)
        rep = toeplitz_entropy_lower_bound(ToeplitzSpec(q=5, z_ref=ref), 4, 2, K)
        assert rep.L == 25
        assert rep.estimate > 0.2

    def test_reference_length_guard(self):
        with pytest.raises(ValueError, match="reference length"):
            toeplitz_entropy_lower_bound(ToeplitzSpec(q=5, z_ref=SignSeq([1])), 4, 2, 10)
