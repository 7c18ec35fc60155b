"""Bernoulli bandit environments: instances, pulls, gaps."""

from dataclasses import dataclass

import numpy as np

from .rng import RngStream


@dataclass(frozen=True)
class BanditInstance:
    """A K-armed Bernoulli bandit; means[a] is arm a's success probability."""

    means: tuple[float, ...]

    def __post_init__(self):
        if len(self.means) < 1:
            raise ValueError("a bandit instance needs at least one arm")
        for a, mu in enumerate(self.means):
            if not 0.0 <= mu <= 1.0:
                raise ValueError(f"mean of arm {a} is {mu}, outside [0, 1]")
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))

    @property
    def k(self) -> int:
        return len(self.means)


def _check_arm(instance: BanditInstance, arm: int) -> None:
    if not 0 <= arm < instance.k:
        raise ValueError(f"arm {arm} out of range for a {instance.k}-armed instance")


def best_arm(instance: BanditInstance) -> int:
    """Lowest-index arm with the maximal mean."""
    return int(np.argmax(instance.means))


def gap(instance: BanditInstance, arm: int) -> float:
    """Suboptimality gap max_a means[a] - means[arm]; zero for every best arm."""
    _check_arm(instance, arm)
    return max(instance.means) - instance.means[arm]


def pull(instance: BanditInstance, arm: int, rng: RngStream) -> int:
    """One Bernoulli reward for `arm`; consumes exactly one draw."""
    _check_arm(instance, arm)
    return 1 if rng.random() < instance.means[arm] else 0


def pull_many(instance: BanditInstance, arm: int, rng: RngStream, n: int) -> np.ndarray:
    """`n` rewards for `arm` as an int8 array; equals n successive pull() calls."""
    _check_arm(instance, arm)
    if n < 0:
        raise ValueError("pull count must be nonnegative")
    return (rng.random(n) < instance.means[arm]).astype(np.int8)


def generate_means(k: int, best_mean: float, gap_step: float) -> tuple[float, ...]:
    """Means [best_mean, best_mean - gap_step, ...] for a uniform-gap instance."""
    if k < 1:
        raise ValueError("k must be at least 1")
    means = tuple(best_mean - a * gap_step for a in range(k))
    if any(m < 0.0 or m > 1.0 for m in means):
        raise ValueError(
            f"generator (k={k}, best_mean={best_mean}, gap={gap_step}) "
            "produces means outside [0, 1]"
        )
    return means
