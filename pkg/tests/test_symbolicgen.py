"""Symbolic constructions: distributional targets use fixed seeds, so the
asserted tolerances are deterministic once verified."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chowla_lab.correlations import CorrelationSpec, chowla_sum
from chowla_lab.empirics import complexity_profile
from chowla_lab.seqcore import SignSeq
from chowla_lab.symbolicgen import (
    BernoulliParams,
    DeterminizeParams,
    SturmianParams,
    bernoulli_prefix,
    determinize_step,
    doubling_word_prefix,
    masked_coin_prefix,
    pair_code_prefix,
    quantize,
    sparse_embed,
    sturmian_prefix,
)

GOLDEN_DENSITY = (3 - math.sqrt(5)) / 2  # 1/phi^2


def golden_params():
    return SturmianParams(alpha=GOLDEN_DENSITY)


class TestSturmian:
    def test_degenerate_slope(self):
        with pytest.warns(UserWarning):
            params = SturmianParams(alpha=0.0, beta=0.3)
        eta = sturmian_prefix(params, 100)
        assert not eta.values.any()

    def test_complexity_exact(self):
        eta = sturmian_prefix(golden_params(), 50_000)
        profile = complexity_profile(eta, 50)
        assert profile.counts.tolist() == list(range(2, 52))

    def test_block_one_counts(self):
        eta = sturmian_prefix(golden_params(), 50_000)
        ones = np.concatenate([[0], np.cumsum(eta.values, dtype=np.int64)])
        counts = ones[50:] - ones[:-50]
        assert counts.min() > 50 * GOLDEN_DENSITY - 3
        assert counts.max() < 50 * GOLDEN_DENSITY + 3

    def test_running_density_band(self):
        eta = sturmian_prefix(golden_params(), 20_000)
        running = np.cumsum(eta.values, dtype=np.float64)
        n = np.arange(1, 20_001)
        assert np.all(np.abs(running / n - GOLDEN_DENSITY) <= 3.0 / n)

    def test_rational_alpha_warns(self):
        with pytest.warns(UserWarning, match="denominator"):
            SturmianParams(alpha=0.5, beta=0.25)

    def test_validation(self):
        with pytest.raises(ValueError):
            SturmianParams(alpha=1.5)
        with pytest.raises(ValueError):
            SturmianParams(alpha=0.3, beta=1.0)


class TestBernoulli:
    def test_reproducible(self):
        p = BernoulliParams((0.25, 0.5, 0.25), seed=99)
        a = bernoulli_prefix((-1, 0, 1), p, 10_000)
        b = bernoulli_prefix((-1, 0, 1), p, 10_000)
        assert a == b

    def test_degenerate(self):
        z = bernoulli_prefix((-1, 1), BernoulliParams((1.0, 0.0), seed=1), 500)
        assert np.all(z.values == -1)

    def test_fair_coin_mean(self):
        z = bernoulli_prefix((-1, 1), BernoulliParams((0.5, 0.5), seed=2), 10**6)
        assert abs(z.values.mean()) < 0.005

    def test_three_letter_square_density(self):
        z = bernoulli_prefix((-1, 0, 1), BernoulliParams((0.25, 0.5, 0.25), seed=3), 10**6)
        assert abs((z.values != 0).mean() - 0.5) < 0.005

    def test_validation(self):
        with pytest.raises(ValueError, match="sum"):
            BernoulliParams((0.5, 0.6), seed=0)
        with pytest.raises(ValueError, match="alphabet size"):
            bernoulli_prefix((-1, 1), BernoulliParams((0.25, 0.5, 0.25), seed=0), 10)


class TestPairCode:
    def test_values_and_mean(self):
        z = pair_code_prefix(2, seed=42, N=10**6)
        assert set(np.unique(z.values)) <= {-1, 0, 1}
        assert abs(z.values.mean()) < 0.005

    def test_lag_one_correlation(self):
        z = pair_code_prefix(2, seed=42, N=10**6 + 1)
        value = chowla_sum(z, CorrelationSpec((1,), (1, 1)), 10**6).final
        assert abs(value - 1 / 64) < 0.005

    def test_k0_five_lag_structure(self):
        # the two coded windows share a coordinate at lag k0-1, so that lag
        # correlates (~1/64) and the others vanish
        z = pair_code_prefix(5, seed=42, N=10**6 + 5)
        values = {
            a: chowla_sum(z, CorrelationSpec((a,), (1, 1)), 10**6).final
            for a in (1, 2, 3, 4, 5)
        }
        for a in (1, 2, 3, 5):
            assert abs(values[a]) < 0.005, (a, values[a])
        assert abs(values[4] - 1 / 64) < 0.005

    def test_rejects_small_k0(self):
        with pytest.raises(ValueError):
            pair_code_prefix(1, seed=0, N=10)


class TestMaskedCoin:
    def test_moments(self):
        x = masked_coin_prefix(seed=7, N=10**6 + 3)
        n = 10**6
        assert abs(chowla_sum(x, CorrelationSpec((1,), (2, 1)), n).final - 0.25) < 0.005
        assert abs(chowla_sum(x, CorrelationSpec((1,), (1, 1)), n).final) < 0.005
        assert abs(chowla_sum(x, CorrelationSpec((1, 3), (1, 1, 1)), n).final) < 0.005

    def test_zero_iff_next_is_tails(self):
        x = masked_coin_prefix(seed=7, N=1000)
        # a zero can only arise from masking, so the support density is ~1/2
        assert 0.4 < (x.values != 0).mean() < 0.6


class TestDoublingWord:
    def test_leading_minus_one(self):
        w = doubling_word_prefix(10**5)
        assert w[1] == -1
        nonzero = w.values[w.values != 0]
        assert nonzero[0] == -1
        assert np.all(nonzero[1:] == 1)

    def test_support_density_small(self):
        w = doubling_word_prefix(10**6)
        assert w.support_count() / 10**6 < 1e-2

    def test_square_blocks_recur(self):
        # at N = 2 * len(A_6) the word is A_6 A_6, so every block of the
        # square from the first half recurs in the second half
        full = doubling_word_prefix(300_000)
        half = 125_312  # len of the 6th doubling stage
        sq = (full.values[: 2 * half] ** 2).astype(np.int8)
        first, second = sq[:half], sq[half:]
        for ell in range(1, 21):
            blocks_first = {first[i : i + ell].tobytes() for i in range(half - ell + 1)}
            blocks_second = {second[i : i + ell].tobytes() for i in range(half - ell + 1)}
            assert blocks_first <= blocks_second, ell


class TestSparseEmbed:
    def test_density_bound(self):
        rng = np.random.default_rng(5)
        w = SignSeq(rng.integers(-1, 2, size=5000))
        for g in (2, 3, 5):
            emb = sparse_embed(w, 200_000, g)
            assert emb.support_count() / len(emb) <= 1 / g

    def test_all_short_blocks_appear(self):
        rng = np.random.default_rng(6)
        w = SignSeq(rng.integers(-1, 2, size=3000))
        emb = sparse_embed(w, 10**6, 2)
        for d in (4, 8):
            wanted = {w.values[i : i + d].tobytes() for i in range(len(w) - d + 1)}
            have = {emb.values[i : i + d].tobytes() for i in range(len(emb) - d + 1)}
            assert wanted <= have, d

    def test_autocorrelations_bounded_by_density(self):
        rng = np.random.default_rng(7)
        w = SignSeq(rng.integers(-1, 2, size=2000))
        emb = sparse_embed(w, 100_000, 4)
        density = emb.support_count() / len(emb)
        for a in (1, 2, 5):
            value = chowla_sum(emb, CorrelationSpec((a,), (1, 1)), len(emb) - a).final
            assert abs(value) <= density

    def test_rejects_short_reference(self):
        with pytest.raises(ValueError, match="shorter"):
            sparse_embed(SignSeq([1, 0, 1]), 100, 2)


class TestDeterminize:
    def test_constant_sequence_unchanged(self):
        u = SignSeq(np.ones(10_000, dtype=np.int8))
        res = determinize_step(u, DeterminizeParams(epsilon=0.2, n_block=10, big_n=100))
        assert res.sequence == u
        assert res.distinct_block_count == 1
        assert res.changed_fraction == 0.0

    def test_iid_collapses_to_constant(self):
        rng = np.random.default_rng(8)
        u = SignSeq(rng.integers(0, 2, size=50_000) * 2 - 1)
        res = determinize_step(u, DeterminizeParams(epsilon=0.1, n_block=20, big_n=100))
        # every 20-window has frequency ~2^-20, far below the 2^-2 threshold
        assert res.unacceptable_fraction == 1.0
        assert res.distinct_block_count == 1
        body = res.sequence.values[: res.blocks_processed * 100]
        assert np.all(body == u.values[0])

    def test_rejects_big_n_exceeding_length(self):
        with pytest.raises(ValueError, match="big_n"):
            determinize_step(SignSeq([1, -1]), DeterminizeParams(0.1, 1, 4))

    def test_params_validation(self):
        with pytest.raises(ValueError, match="divisible"):
            DeterminizeParams(epsilon=0.1, n_block=3, big_n=10)
        with pytest.raises(ValueError, match="epsilon"):
            DeterminizeParams(epsilon=1.0, n_block=2, big_n=10)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_recoding_bounds(self, data):
        kind = data.draw(st.sampled_from(["iid", "periodic", "sturmian", "blocky"]))
        seed = data.draw(st.integers(0, 2**31))
        rng = np.random.default_rng(seed)
        length = data.draw(st.integers(200, 2000))
        if kind == "iid":
            vals = rng.integers(-1, 2, size=length)
        elif kind == "periodic":
            period = rng.integers(1, 7)
            vals = np.resize(rng.integers(-1, 2, size=period), length)
        elif kind == "sturmian":
            vals = (np.mod(np.arange(1, length + 1) * 0.381966, 1.0) >= 0.618034).astype(np.int8)
        else:
            vals = np.repeat(rng.integers(-1, 2, size=max(1, length // 50)), 50)[:length]
        if length < 40:
            return
        u = SignSeq(vals)
        n_block = data.draw(st.sampled_from([2, 4, 5, 10]))
        multiple = data.draw(st.integers(2, max(2, length // (4 * n_block))))
        big_n = n_block * multiple
        if big_n > length:
            return
        eps = data.draw(st.sampled_from([0.05, 0.1, 0.2, 0.3]))
        params = DeterminizeParams(epsilon=eps, n_block=n_block, big_n=big_n)
        res = determinize_step(u, params)
        assert res.distinct_block_count < res.distinct_block_bound(params)
        assert res.changed_fraction < eps + res.unacceptable_fraction + 1e-12


class TestQuantize:
    def test_constant(self):
        q = quantize([0.4] * 5, 0.2)
        assert np.all(q.values == q.values[0])
        assert q.alphabet.size == 1

    def test_examples_within_step(self):
        y = np.array([0.1, 0.9, 0.5])
        q = quantize(y, 0.25)
        assert np.all(np.abs(q.values - y) < 0.25)
        assert np.all(q.values <= y)

    def test_cosine_orbit_alphabet(self):
        n = np.arange(1, 5001)
        y = np.cos(2 * np.pi * n * (math.sqrt(2) - 1))
        q = quantize(y, 0.1)
        assert q.alphabet.size <= 21

    @given(
        st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=100),
        st.floats(1e-3, 10.0, allow_nan=False),
    )
    @settings(max_examples=100)
    def test_sup_norm_error(self, ys, step):
        q = quantize(ys, step)
        assert np.all(np.abs(q.values - np.asarray(ys)) < step)

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            quantize([1.0], 0.0)
