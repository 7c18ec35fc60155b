"""Beta-Bernoulli posterior state: counting, sampling, and probability rounding.

A counter pair (S, F) backs the Beta(S + 1, F + 1) posterior. Posterior
sampling goes through the inverse regularized incomplete beta function on an
open-interval uniform, so every sample costs exactly one generator word and
replays are bit-stable.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .rng import RngStream


@dataclass(frozen=True)
class BetaCounts:
    """Success/failure counters; counts only ever grow."""

    successes: int = 0
    failures: int = 0

    def __post_init__(self):
        if self.successes < 0 or self.failures < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.successes + self.failures


def record(counts: BetaCounts, outcome: int) -> BetaCounts:
    """Return a copy with the matching counter incremented by one."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    if outcome == 1:
        return BetaCounts(counts.successes + 1, counts.failures)
    return BetaCounts(counts.successes, counts.failures + 1)


def sample_theta(counts: BetaCounts, rng: RngStream, size: int | None = None):
    """Draw from Beta(S + 1, F + 1); strictly inside (0, 1).

    One generator word per sample; a block of n equals n scalar draws.
    """
    u = rng.open_uniform(size)
    theta = special.betaincinv(counts.successes + 1, counts.failures + 1, u)
    return float(theta) if size is None else theta


def sample_posterior_array(
    successes: np.ndarray, failures: np.ndarray, rng: RngStream
) -> np.ndarray:
    """One Beta(S_a + 1, F_a + 1) draw per arm from parallel count arrays."""
    u = rng.open_uniform(len(successes))
    return special.betaincinv(successes + 1, failures + 1, u)


def bernoulli_round(r_hat: float, rng: RngStream) -> int:
    """One Bernoulli trial with success probability r_hat; one draw consumed."""
    if not 0.0 <= r_hat <= 1.0:
        raise ValueError(f"success probability {r_hat} outside [0, 1]")
    return 1 if rng.random() < r_hat else 0
