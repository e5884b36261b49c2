"""Binary entropy, branch inverses, and the entropy-pair boundary curves."""

import math

import numpy as np
import pytest

from chowla_lab.entbounds import (
    H_TWO_THIRDS,
    LOG2_3,
    EntropyPair,
    audit_entropy_pair,
    binary_entropy,
    entropy_inverse,
    full_entropy_lower,
    full_entropy_upper,
    sign_extension_entropy,
)


class TestBinaryEntropy:
    def test_maximum(self):
        assert binary_entropy(0.5) == 1.0

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_two_thirds_identity(self):
        assert abs(binary_entropy(2 / 3) - (LOG2_3 - 2 / 3)) < 1e-12

    def test_domain(self):
        with pytest.raises(ValueError):
            binary_entropy(1.5)


class TestEntropyInverse:
    def test_extremes(self):
        assert entropy_inverse(1.0, "lower") == entropy_inverse(1.0, "upper") == 0.5
        assert entropy_inverse(0.0, "lower") == 0.0
        assert entropy_inverse(0.0, "upper") == 1.0

    def test_half_round_trip(self):
        x = entropy_inverse(0.5, "upper")
        assert abs(binary_entropy(x) - 0.5) < 1e-10
        assert abs(x - 0.889972) < 1e-5

    def test_round_trip_grid(self):
        for y in np.linspace(0.0, 1.0, 1001):
            for branch in ("lower", "upper"):
                assert abs(binary_entropy(entropy_inverse(float(y), branch)) - y) < 1e-10

    def test_branch_ranges(self):
        for y in (0.1, 0.5, 0.9):
            assert entropy_inverse(y, "lower") <= 0.5 <= entropy_inverse(y, "upper")

    def test_density_between_branches(self):
        for d in np.linspace(0.0, 1.0, 101):
            h = binary_entropy(float(d))
            assert entropy_inverse(h, "lower") - 1e-9 <= d <= entropy_inverse(h, "upper") + 1e-9


class TestBoundaryCurves:
    def test_values_at_one(self):
        assert abs(full_entropy_lower(1.0) - 1.5) < 1e-12
        assert full_entropy_upper(1.0) == LOG2_3

    def test_values_at_zero(self):
        assert full_entropy_lower(0.0) == 0.0
        assert full_entropy_upper(0.0) == 1.0

    def test_upper_continuous_at_junction(self):
        x = H_TWO_THIRDS
        below = x - 1e-12
        assert abs(full_entropy_upper(below) - LOG2_3) < 1e-9
        assert full_entropy_upper(x) == LOG2_3

    def test_junction_is_exact_identity(self):
        # H(2/3) + 2/3 = log2(3)
        assert abs(H_TWO_THIRDS + 2 / 3 - LOG2_3) < 1e-12

    def test_upper_non_decreasing(self):
        xs = np.linspace(0.0, 1.0, 400)
        vals = [full_entropy_upper(float(x)) for x in xs]
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))


class TestPairAudit:
    def test_squarefree_pair_passes_recurrent(self):
        h2 = 6 / math.pi**2
        verdict = audit_entropy_pair(EntropyPair(h2, h2 * LOG2_3), recurrent_closed=True)
        assert verdict.passed
        assert verdict.lower_margin > 0

    def test_coin_pair_passes(self):
        verdict = audit_entropy_pair(EntropyPair(0.0, 1.0), recurrent_closed=False)
        assert verdict.passed
        assert verdict.lower_margin is None

    def test_equality_only_at_log3(self):
        verdict = audit_entropy_pair(EntropyPair(1.0, LOG2_3), recurrent_closed=False)
        assert verdict.passed
        assert verdict.equality_flag

    def test_invariant_enforced(self):
        with pytest.raises(ValueError):
            EntropyPair(0.5, 0.2)  # h_full below h_square
        with pytest.raises(ValueError):
            EntropyPair(0.1, 1.2)  # above h_square + 1


class TestMeasuredPairAudit:
    def test_masked_coin_estimates_pass_audit(self):
        # measured entropy pairs of the two product constructions sit inside
        # the boundary curves, within the estimator's declared uncertainty
        from chowla_lab.empirics import complexity_profile, entropy_estimate
        from chowla_lab.seqcore import pointwise_product, square_map
        from chowla_lab.symbolicgen import (
            BernoulliParams,
            SturmianParams,
            bernoulli_prefix,
            sturmian_prefix,
        )
        import warnings

        n = 10**6
        golden = (3 - math.sqrt(5)) / 2
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cases = [
                (SturmianParams(alpha=golden), (-1, 1), (0.5, 0.5)),
                (SturmianParams(alpha=0.5, beta=0.25), (-1, 0, 1), (0.25, 0.5, 0.25)),
            ]
            for sturmian, alphabet, probs in cases:
                eta = sturmian_prefix(sturmian, n)
                u = bernoulli_prefix(alphabet, BernoulliParams(probs, seed=13), n)
                z = pointwise_product(eta, u)
                est_full = entropy_estimate(complexity_profile(z, 14), 10, 14)
                est_sq = entropy_estimate(complexity_profile(square_map(z), 14), 10, 14)
                pair = EntropyPair(
                    h_square=min(est_sq.value, 1.0), h_full=est_full.value
                )
                verdict = audit_entropy_pair(pair, recurrent_closed=True)
                slack = est_full.uncertainty + est_sq.uncertainty
                assert verdict.passed or verdict.upper_margin > -slack
                assert verdict.lower_margin is None or verdict.lower_margin > -slack


class TestSignExtensionEntropy:
    def test_point_mass(self):
        assert sign_extension_entropy(0.0) == (0.0, 0.0)

    def test_full_support(self):
        base, ext = sign_extension_entropy(1.0)
        assert base == 0.0 and abs(ext - 1.0) < 1e-12

    def test_half(self):
        base, ext = sign_extension_entropy(0.5)
        assert abs(base - 1.0) < 1e-12
        assert abs(ext - 1.5) < 1e-12

    def test_identity_on_grid(self):
        for d in np.linspace(0.0, 1.0, 1001):
            base, ext = sign_extension_entropy(float(d))
            assert abs(ext - (base + d)) < 1e-12
