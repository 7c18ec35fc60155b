import math

import numpy as np
import pytest

from dets.bandit import BanditInstance, best_arm, gap, generate_means, pull, pull_many
from dets.rng import RngStream


def test_pull_degenerate_probabilities():
    rng = RngStream(0, 1)
    sure = BanditInstance((1.0,))
    never = BanditInstance((0.0,))
    for _ in range(100):
        assert pull(sure, 0, rng) == 1
        assert pull(never, 0, rng) == 0


def test_pull_monte_carlo_mean():
    # 3-sigma band for 1e6 Bernoulli(0.3) draws is 0.00137; spec band 0.002.
    env = BanditInstance((0.3,))
    rewards = pull_many(env, 0, RngStream(42, 1), 1_000_000)
    assert abs(rewards.mean() - 0.3) <= 0.002


def test_pull_invalid_arm():
    env = BanditInstance((0.5, 0.6))
    with pytest.raises(ValueError, match="arm"):
        pull(env, 2, RngStream(0, 1))
    with pytest.raises(ValueError, match="arm"):
        pull(env, -1, RngStream(0, 1))


def test_pull_many_matches_scalar_pulls():
    env = BanditInstance((0.37,))
    block = pull_many(env, 0, RngStream(7, 3), 500)
    rng = RngStream(7, 3)
    singles = [pull(env, 0, rng) for _ in range(500)]
    assert block.tolist() == singles


def test_gap_examples():
    env = BanditInstance((0.9, 0.1))
    assert gap(env, 1) == pytest.approx(0.8)
    assert gap(env, 0) == 0.0
    tied = BanditInstance((0.5, 0.5, 0.2))
    assert gap(tied, 1) == 0.0


def test_gap_nonnegative_and_zero_at_best():
    rng = np.random.default_rng(5)
    for _ in range(20):
        means = tuple(rng.random(rng.integers(1, 8)))
        env = BanditInstance(means)
        assert gap(env, best_arm(env)) == 0.0
        assert all(gap(env, a) >= 0.0 for a in range(env.k))


def test_best_arm_examples():
    assert best_arm(BanditInstance((0.2, 0.9, 0.4))) == 1
    assert best_arm(BanditInstance((0.7,))) == 0
    assert best_arm(BanditInstance((0.6, 0.6))) == 0  # lowest-index tie-break


def test_invalid_instances():
    with pytest.raises(ValueError):
        BanditInstance(())
    with pytest.raises(ValueError):
        BanditInstance((0.5, 1.2))
    with pytest.raises(ValueError):
        BanditInstance((-0.1,))


def test_empirical_mean_concentration():
    # Chernoff-style check: |mean - mu| <= 4*sqrt(mu(1-mu)/N) in >= 99% of
    # trials. For N=1e5 the 4-sigma exceedance probability is ~6e-5, so 198
    # of 200 passing leaves enormous slack.
    mu, n_pulls, trials = 0.3, 100_000, 200
    env = BanditInstance((mu,))
    band = 4 * math.sqrt(mu * (1 - mu) / n_pulls)
    rng = RngStream(11, 1)
    passed = sum(
        abs(pull_many(env, 0, rng, n_pulls).mean() - mu) <= band
        for _ in range(trials)
    )
    assert passed >= 198


def test_equal_streams_identical_sequences():
    a = RngStream(123, 4)
    b = RngStream(123, 4)
    assert np.array_equal(a.random(1000), b.random(1000))
    assert np.array_equal(a.open_uniform(1000), b.open_uniform(1000))


def test_distinct_streams_pass_independence_smoke_test():
    x = RngStream(123, 1).random(100_000)
    y = RngStream(123, 2).random(100_000)
    corr = np.corrcoef(x, y)[0, 1]
    assert abs(corr) < 0.01


def test_generate_means():
    assert generate_means(3, 0.9, 0.2) == (0.9, 0.7, 0.5)
    assert generate_means(1, 0.4, 0.9) == (0.4,)
    with pytest.raises(ValueError):
        generate_means(4, 0.5, 0.3)  # would go negative
    with pytest.raises(ValueError):
        generate_means(0, 0.5, 0.1)
