"""Per-agent policies: phased burn-in elimination, the agent side of the
cooperative stage, and a plain per-pull Thompson-sampling baseline.

Phase schedule: in phase l every active arm is pulled m_l = ceil(c * 4^l * ln T)
times, the pull average is collapsed into a single Bernoulli outcome recorded
into that arm's posterior, one posterior sample per arm is drawn, and arms
sampling more than 2^-l below the phase maximum are eliminated. A phase whose
full cost m_l * |active| exceeds the remaining budget is incomplete: the budget
is still spent on pulls (in arm order) but nothing is recorded and no
elimination happens, since the thresholds assume m_l samples per arm.

Threshold semantics are deliberately asymmetric between the two elimination
rules: local elimination keeps strictly-above-threshold arms, broadcast
elimination keeps at-or-above. Both are pinned by tests.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bandit import BanditInstance, pull, pull_many
from .errors import ConfigError
from .posterior import BetaCounts, bernoulli_round, record, sample_posterior_array, sample_theta
from .rng import RngStream, agent_stream_id
from .trace import PullBlock


def phase_length(l: int, horizon, c: float = 0.5) -> int:
    """Pulls per active arm in phase l: ceil(c * 4^l * ln horizon)."""
    if l < 1:
        raise ValueError(f"phase index must be >= 1, got {l}")
    if c <= 0:
        raise ConfigError(f"schedule constant c must be positive, got {c}")
    if horizon < 2:
        raise ConfigError(f"horizon must be >= 2 for the phase schedule, got {horizon}")
    return math.ceil(c * 4**l * math.log(horizon))


@dataclass
class PhaseState:
    """Snapshot of an agent's current phase."""

    index: int
    active: list[int]
    pulls_per_arm: int

    @property
    def gap_proxy(self) -> float:
        return 2.0 ** -self.index


@dataclass
class AgentState:
    agent_id: int
    rng: RngStream
    counts: list[BetaCounts]
    active: list[int]
    pulls_used: int = 0
    round: int = 0  # agent-local rounds completed so far
    phase: PhaseState | None = None


def new_agent(agent_id: int, k: int, seed: int) -> AgentState:
    return AgentState(
        agent_id=agent_id,
        rng=RngStream(seed, agent_stream_id(agent_id)),
        counts=[BetaCounts() for _ in range(k)],
        active=list(range(k)),
    )


def reset_posteriors(state: AgentState) -> None:
    state.counts = [BetaCounts() for _ in state.counts]


def _pull_block(state: AgentState, env: BanditInstance, arm: int, n: int,
                stage: int, l: int) -> PullBlock:
    rewards = pull_many(env, arm, state.rng, n)
    block = PullBlock(state.agent_id, arm, stage, l, state.round + 1, rewards)
    state.round += n
    state.pulls_used += n
    return block


def _observe_arm(state: AgentState, env: BanditInstance, arm: int, n: int,
                 stage: int, l: int) -> tuple[PullBlock, float]:
    """Pull n times, collapse the average into one recorded outcome, sample."""
    block = _pull_block(state, env, arm, n, stage, l)
    r_hat = float(block.rewards.mean())
    outcome = bernoulli_round(r_hat, state.rng)
    state.counts[arm] = record(state.counts[arm], outcome)
    theta = sample_theta(state.counts[arm], state.rng)
    return block, theta


@dataclass
class PhaseOutcome:
    index: int
    pulls_per_arm: int
    complete: bool
    samples: dict[int, float]  # empty when the phase was incomplete
    blocks: list[PullBlock]
    pulls: int


def burn_in_phase(state: AgentState, env: BanditInstance, l: int, m: int,
                  budget: int) -> PhaseOutcome:
    """Run one burn-in phase against the remaining budget.

    Completeness is decided upfront: the phase is complete only when
    m * |active| fits in the budget, and only complete phases touch the
    posteriors. An incomplete phase spends the whole budget on pulls in arm
    order (the trailing arm gets whatever is left) and records nothing.
    """
    active = list(state.active)
    if not active:
        raise ValueError("burn-in phase requires a nonempty active set")
    state.phase = PhaseState(l, active, m)
    blocks: list[PullBlock] = []
    samples: dict[int, float] = {}
    complete = budget >= m * len(active)
    pulls = 0
    if complete:
        for arm in active:
            block, theta = _observe_arm(state, env, arm, m, 1, l)
            blocks.append(block)
            samples[arm] = theta
            pulls += m
    else:
        left = budget
        for arm in active:
            take = min(m, left)
            if take == 0:
                break
            blocks.append(_pull_block(state, env, arm, take, 1, l))
            pulls += take
            left -= take
    return PhaseOutcome(l, m, complete, samples, blocks, pulls)


def local_eliminate(samples: dict[int, float], l: int) -> list[int]:
    """Keep arms sampling strictly above (phase max - 2^-l); order preserved."""
    if not samples:
        raise ValueError("cannot eliminate from an empty sample map")
    threshold = max(samples.values()) - 2.0**-l
    return [arm for arm, theta in samples.items() if theta > threshold]


@dataclass
class BurnInResult:
    survivors: list[int]
    blocks: list[PullBlock]
    completed_phases: int
    phase_outcomes: list[PhaseOutcome] = field(default_factory=list)


def run_burn_in(state: AgentState, env: BanditInstance, budget: int,
                horizon, c: float = 0.5) -> BurnInResult:
    """Run phases l = 1, 2, ... until exactly `budget` pulls are consumed."""
    if budget < 1:
        raise ValueError(f"burn-in budget must be >= 1, got {budget}")
    blocks: list[PullBlock] = []
    outcomes: list[PhaseOutcome] = []
    remaining = budget
    l = 0
    completed = 0
    while remaining > 0:
        l += 1
        m = phase_length(l, horizon, c)
        outcome = burn_in_phase(state, env, l, m, remaining)
        blocks.extend(outcome.blocks)
        outcomes.append(outcome)
        remaining -= outcome.pulls
        if not outcome.complete:
            break
        state.active = local_eliminate(outcome.samples, l)
        completed = l
    return BurnInResult(list(state.active), blocks, completed, outcomes)


def distributed_phase(state: AgentState, env: BanditInstance, l: int,
                      m: int) -> tuple[dict[int, float], float | None, list[PullBlock]]:
    """Agent side of one cooperative phase over its own arm list.

    Returns the per-arm posterior samples, the local maximum to report to the
    server (None marks an idle agent with no arms), and the pull blocks.
    The caller guarantees the phase fits the agent's budget.
    """
    state.phase = PhaseState(l, list(state.active), m)
    samples: dict[int, float] = {}
    blocks: list[PullBlock] = []
    for arm in state.active:
        block, theta = _observe_arm(state, env, arm, m, 2, l)
        blocks.append(block)
        samples[arm] = theta
    local_max = max(samples.values()) if samples else None
    return samples, local_max, blocks


def broadcast_eliminate(samples: dict[int, float], theta_star: float,
                        l: int) -> list[int]:
    """Keep arms with theta + 2^-l at or above the broadcast global max."""
    return [arm for arm, theta in samples.items() if theta + 2.0**-l >= theta_star]


@dataclass
class VanillaAgent:
    """Per-pull Thompson-sampling baseline state."""

    agent_id: int
    rng: RngStream
    successes: np.ndarray
    failures: np.ndarray


def new_vanilla_agent(agent_id: int, k: int, seed: int) -> VanillaAgent:
    return VanillaAgent(
        agent_id=agent_id,
        rng=RngStream(seed, agent_stream_id(agent_id)),
        successes=np.zeros(k, np.int64),
        failures=np.zeros(k, np.int64),
    )


def vanilla_ts_step(agent: VanillaAgent, env: BanditInstance) -> tuple[int, int]:
    """Sample every arm's posterior, pull the argmax, record the raw reward."""
    theta = sample_posterior_array(agent.successes, agent.failures, agent.rng)
    arm = int(np.argmax(theta))
    reward = pull(env, arm, agent.rng)
    if reward:
        agent.successes[arm] += 1
    else:
        agent.failures[arm] += 1
    return arm, reward
