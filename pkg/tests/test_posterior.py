import numpy as np
import pytest

from dets.posterior import (
    BetaCounts,
    bernoulli_round,
    record,
    sample_posterior_array,
    sample_theta,
)
from dets.rng import RngStream


def test_record_examples():
    assert record(BetaCounts(0, 0), 1) == BetaCounts(1, 0)
    assert record(BetaCounts(0, 0), 0) == BetaCounts(0, 1)
    assert record(BetaCounts(3, 5), 1) == BetaCounts(4, 5)


def test_record_rejects_non_binary():
    with pytest.raises(ValueError):
        record(BetaCounts(), 2)
    with pytest.raises(ValueError):
        record(BetaCounts(), 0.5)


def test_counts_never_negative():
    with pytest.raises(ValueError):
        BetaCounts(-1, 0)


@pytest.mark.parametrize(
    "s,f",
    [(0, 0), (3, 1), (50, 10)],
)
def test_sample_theta_matches_analytic_mean(s, f):
    # Beta(S+1, F+1) has mean (S+1)/(S+F+2); 1e6 samples put 3 sigma well
    # inside the 0.002 band for all three count pairs.
    counts = BetaCounts(s, f)
    samples = sample_theta(counts, RngStream(99, 1), size=1_000_000)
    analytic = (s + 1) / (s + f + 2)
    assert abs(samples.mean() - analytic) <= 0.002


@pytest.mark.parametrize("s,f", [(0, 0), (0, 50), (50, 0), (3, 7)])
def test_sample_theta_strictly_inside_unit_interval(s, f):
    samples = sample_theta(BetaCounts(s, f), RngStream(5, 1), size=10_000)
    assert np.all(samples > 0.0)
    assert np.all(samples < 1.0)


def test_sample_theta_deterministic_given_state():
    a = sample_theta(BetaCounts(2, 3), RngStream(17, 2))
    b = sample_theta(BetaCounts(2, 3), RngStream(17, 2))
    assert a == b


def test_sample_theta_consumes_one_draw_per_sample():
    # A scalar sample must advance the stream exactly like one open_uniform
    # draw: the next draws from a replayed stream line up.
    rng = RngStream(31, 1)
    sample_theta(BetaCounts(4, 4), rng)
    tail = rng.open_uniform(5)
    replay = RngStream(31, 1)
    replay.open_uniform()
    assert np.array_equal(tail, replay.open_uniform(5))


def test_sample_theta_block_matches_scalar_sequence():
    counts = BetaCounts(6, 2)
    block = sample_theta(counts, RngStream(8, 1), size=64)
    rng = RngStream(8, 1)
    singles = [sample_theta(counts, rng) for _ in range(64)]
    assert block.tolist() == singles


def test_sample_posterior_array_matches_per_arm_draws():
    successes = np.array([0, 3, 50])
    failures = np.array([0, 1, 10])
    block = sample_posterior_array(successes, failures, RngStream(21, 1))
    rng = RngStream(21, 1)
    singles = [
        sample_theta(BetaCounts(int(s), int(f)), rng)
        for s, f in zip(successes, failures)
    ]
    assert block.tolist() == singles


def test_stochastic_dominance_of_higher_success_counts():
    # For fixed F, more successes push the sampled CDF down (at or below the
    # smaller-S CDF at every decile, tolerance 0.01 on 1e5 samples).
    n = 100_000
    lo = sample_theta(BetaCounts(3, 2), RngStream(3, 1), size=n)
    hi = sample_theta(BetaCounts(6, 2), RngStream(3, 2), size=n)
    deciles = np.quantile(lo, np.arange(0.1, 1.0, 0.1))
    for q in deciles:
        cdf_lo = np.mean(lo <= q)
        cdf_hi = np.mean(hi <= q)
        assert cdf_hi <= cdf_lo + 0.01


def test_bernoulli_round_degenerate():
    rng = RngStream(0, 1)
    for _ in range(100):
        assert bernoulli_round(1.0, rng) == 1
        assert bernoulli_round(0.0, rng) == 0


def test_bernoulli_round_monte_carlo():
    # 3-sigma band for 1e6 Bernoulli(0.25) trials is exactly 0.0013.
    rng = RngStream(77, 1)
    mean = np.mean([bernoulli_round(0.25, rng) for _ in range(1_000_000)])
    assert abs(mean - 0.25) <= 0.0013


def test_bernoulli_round_domain():
    rng = RngStream(0, 1)
    with pytest.raises(ValueError):
        bernoulli_round(1.5, rng)
    with pytest.raises(ValueError):
        bernoulli_round(-0.1, rng)
