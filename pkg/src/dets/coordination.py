"""Simulated central server: reallocation, per-phase max aggregation and
broadcast, phase barriers, message accounting, and the full policy runners.

The server lives in-process with zero latency but message counts are exact:
every cooperative phase produces M agent-max reports and M broadcast
deliveries. Agents may execute between barriers either sequentially or on a
thread pool; results are gathered by agent id, so both modes produce the same
canonical trace.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .agents import (
    AgentState,
    VanillaAgent,
    broadcast_eliminate,
    distributed_phase,
    new_agent,
    new_vanilla_agent,
    phase_length,
    reset_posteriors,
    run_burn_in,
    vanilla_ts_step,
)
from .bandit import BanditInstance
from .errors import ConfigError, ProtocolError
from .posterior import BetaCounts
from .trace import PullBlock, Trace, trace_from_blocks

AGENT_MAX = "agent_max"
BROADCAST = "broadcast"

POLICY_DISTRIBUTED = "distributed-ets"
POLICY_INDEPENDENT = "independent-ets"
POLICY_VANILLA = "vanilla-ts"
POLICIES = (POLICY_DISTRIBUTED, POLICY_INDEPENDENT, POLICY_VANILLA)


@dataclass(frozen=True)
class Message:
    kind: str  # AGENT_MAX or BROADCAST
    phase: int
    sender: int | str  # agent id, or "server" for broadcasts
    payload: float | None  # None marks an idle agent's "no sample" report


@dataclass(frozen=True)
class Allocation:
    """Disjoint per-agent arm lists covering the pooled survivor set."""

    assignments: tuple[tuple[int, ...], ...]


def allocate_arms(pooled: list[int], m_agents: int) -> Allocation:
    """Round-robin by ascending arm index: rank r goes to agent r mod M."""
    if m_agents < 1:
        raise ValueError("need at least one agent")
    ordered = sorted(pooled)
    assignments = [ordered[i::m_agents] for i in range(m_agents)]
    return Allocation(tuple(tuple(a) for a in assignments))


def aggregate_max(maxes: list[tuple[int, float | None]]) -> float:
    """Server-side reduction of the agents' reported local maxima."""
    reals = [payload for _, payload in maxes if payload is not None]
    if not reals:
        raise ProtocolError("every agent reported no-sample: the global active set emptied")
    return max(reals)


@dataclass
class StagePhaseLog:
    phase: int
    theta_star: float
    active_after: list[list[int]]


@dataclass
class RunResult:
    policy: str
    seed: int
    m_agents: int
    horizon: int
    trace: Trace
    posteriors: list[list[BetaCounts]]
    pulls_by_agent: list[int]
    d: int | None = None  # per-agent burn-in budget (None for the baseline)
    stage1_phases: list[int] | None = None
    stage1_survivors: list[list[int]] | None = None
    pooled: list[int] | None = None
    allocation: Allocation | None = None
    stage2_start: int | None = None
    stage2_phases: int = 0
    stage2_log: list[StagePhaseLog] = field(default_factory=list)
    survivors_by_agent: list[list[int]] | None = None
    survivors: list[int] | None = None
    messages: list[Message] = field(default_factory=list)

    def message_counts(self) -> dict[str, int]:
        return {
            AGENT_MAX: sum(1 for m in self.messages if m.kind == AGENT_MAX),
            BROADCAST: sum(1 for m in self.messages if m.kind == BROADCAST),
        }


def _map_agents(mode: str, fn, agents):
    if mode == "threaded":
        with ThreadPoolExecutor(max_workers=len(agents)) as pool:
            return list(pool.map(fn, agents))
    return [fn(a) for a in agents]


def _merge_phase_blocks(per_agent_blocks: list[list[PullBlock]]) -> list[PullBlock]:
    """Canonical stage-wide order: phase ascending, then agent id."""
    merged: list[PullBlock] = []
    top = max((b.phase for blocks in per_agent_blocks for b in blocks), default=0)
    for l in range(1, top + 1):
        for blocks in per_agent_blocks:
            merged.extend(b for b in blocks if b.phase == l)
    return merged


def run_distributed(
    env: BanditInstance,
    m_agents: int,
    horizon: int,
    *,
    seed: int,
    c: float = 0.5,
    pooling: str = "union",
    carry_posteriors: bool = False,
    mode: str = "sequential",
) -> RunResult:
    """Two-stage cooperative run: independent burn-in, then coordinated
    elimination with per-phase max aggregation and broadcast."""
    k = env.k
    if m_agents < 1:
        raise ConfigError(f"M must be >= 1, got {m_agents}")
    d = horizon // (m_agents * k)
    if d < 1:
        raise ConfigError(
            f"horizon T={horizon} is below M*K={m_agents * k}: burn-in budget would be 0"
        )
    agents = [new_agent(i, k, seed) for i in range(m_agents)]

    # Stage 1: independent burn-in, one budget of d pulls per agent.
    burn = _map_agents(mode, lambda ag: run_burn_in(ag, env, d, horizon, c), agents)
    stage1_blocks = _merge_phase_blocks([r.blocks for r in burn])
    stage1_survivors = [list(r.survivors) for r in burn]
    l0 = min(r.completed_phases for r in burn)

    sets = [set(s) for s in stage1_survivors]
    if pooling == "union":
        pooled = sorted(set().union(*sets))
    elif pooling == "intersection":
        pooled = sorted(set.intersection(*sets))
        if not pooled:
            raise ProtocolError("intersection pooling emptied the global survivor set")
    else:
        raise ConfigError(f"unknown pooling mode {pooling!r}")

    allocation = allocate_arms(pooled, m_agents)
    for agent, assigned in zip(agents, allocation.assignments):
        agent.active = list(assigned)
        if not carry_posteriors:
            reset_posteriors(agent)

    # Stage 2: lockstep phases; a phase only starts if it fits every
    # participating agent's remaining budget.
    budget2 = horizon - d
    stage2_blocks: list[PullBlock] = []
    messages: list[Message] = []
    stage2_log: list[StagePhaseLog] = []
    l = l0
    completed2 = 0
    while True:
        if all(not agent.active for agent in agents):
            raise ProtocolError("all agents went idle: the global active set emptied")
        l += 1
        m = phase_length(l, horizon, c)
        used2 = [agent.pulls_used - d for agent in agents]
        if any(
            used + m * len(agent.active) > budget2
            for used, agent in zip(used2, agents)
        ):
            break
        outs = _map_agents(
            mode, lambda ag: distributed_phase(ag, env, l, m), agents
        )
        for i, (_, local_max, _) in enumerate(outs):
            messages.append(Message(AGENT_MAX, l, i, local_max))
        theta_star = aggregate_max([(i, out[1]) for i, out in enumerate(outs)])
        for i in range(m_agents):
            messages.append(Message(BROADCAST, l, "server", theta_star))
        for agent, (samples, _, _) in zip(agents, outs):
            agent.active = broadcast_eliminate(samples, theta_star, l)
        for _, _, blocks in outs:
            stage2_blocks.extend(blocks)
        completed2 += 1
        stage2_log.append(StagePhaseLog(l, theta_star, [list(a.active) for a in agents]))

    survivors_by_agent = [list(a.active) for a in agents]
    survivors = sorted(set().union(*(set(s) for s in survivors_by_agent)))
    return RunResult(
        policy=POLICY_DISTRIBUTED,
        seed=seed,
        m_agents=m_agents,
        horizon=horizon,
        trace=trace_from_blocks(stage1_blocks + stage2_blocks),
        posteriors=[list(a.counts) for a in agents],
        pulls_by_agent=[a.pulls_used for a in agents],
        d=d,
        stage1_phases=[r.completed_phases for r in burn],
        stage1_survivors=stage1_survivors,
        pooled=pooled,
        allocation=allocation,
        stage2_start=l0,
        stage2_phases=completed2,
        stage2_log=stage2_log,
        survivors_by_agent=survivors_by_agent,
        survivors=survivors,
        messages=messages,
    )


def run_independent(
    env: BanditInstance,
    m_agents: int,
    horizon: int,
    *,
    seed: int,
    c: float = 0.5,
    mode: str = "sequential",
) -> RunResult:
    """Every agent runs the burn-in elimination alone for the whole horizon."""
    if m_agents < 1:
        raise ConfigError(f"M must be >= 1, got {m_agents}")
    agents = [new_agent(i, env.k, seed) for i in range(m_agents)]
    burn = _map_agents(mode, lambda ag: run_burn_in(ag, env, horizon, horizon, c), agents)
    survivors_by_agent = [list(r.survivors) for r in burn]
    survivors = sorted(set().union(*(set(s) for s in survivors_by_agent)))
    return RunResult(
        policy=POLICY_INDEPENDENT,
        seed=seed,
        m_agents=m_agents,
        horizon=horizon,
        trace=trace_from_blocks(_merge_phase_blocks([r.blocks for r in burn])),
        posteriors=[list(a.counts) for a in agents],
        pulls_by_agent=[a.pulls_used for a in agents],
        d=horizon,
        stage1_phases=[r.completed_phases for r in burn],
        stage1_survivors=survivors_by_agent,
        survivors_by_agent=survivors_by_agent,
        survivors=survivors,
    )


def _vanilla_agent_run(agent: VanillaAgent, env: BanditInstance, horizon: int) -> Trace:
    import numpy as np

    arms = np.empty(horizon, np.int32)
    rewards = np.empty(horizon, np.int8)
    for t in range(horizon):
        arm, reward = vanilla_ts_step(agent, env)
        arms[t] = arm
        rewards[t] = reward
    return Trace(
        t=np.arange(1, horizon + 1, dtype=np.int64),
        agent=np.full(horizon, agent.agent_id, np.int32),
        arm=arms,
        reward=rewards,
        stage=np.ones(horizon, np.int8),
        phase=np.zeros(horizon, np.int32),
    )


def run_vanilla(
    env: BanditInstance,
    m_agents: int,
    horizon: int,
    *,
    seed: int,
    mode: str = "sequential",
) -> RunResult:
    """Per-pull Thompson-sampling baseline, one independent agent per stream."""
    from .trace import concat_traces

    if m_agents < 1:
        raise ConfigError(f"M must be >= 1, got {m_agents}")
    agents = [new_vanilla_agent(i, env.k, seed) for i in range(m_agents)]
    traces = _map_agents(mode, lambda ag: _vanilla_agent_run(ag, env, horizon), agents)
    posteriors = [
        [BetaCounts(int(s), int(f)) for s, f in zip(a.successes, a.failures)]
        for a in agents
    ]
    return RunResult(
        policy=POLICY_VANILLA,
        seed=seed,
        m_agents=m_agents,
        horizon=horizon,
        trace=concat_traces(traces),
        posteriors=posteriors,
        pulls_by_agent=[horizon] * m_agents,
    )


def run_policy(
    policy: str,
    env: BanditInstance,
    m_agents: int,
    horizon: int,
    *,
    seed: int,
    c: float = 0.5,
    pooling: str = "union",
    carry_posteriors: bool = False,
    mode: str = "sequential",
) -> RunResult:
    if policy == POLICY_DISTRIBUTED:
        return run_distributed(
            env, m_agents, horizon, seed=seed, c=c, pooling=pooling,
            carry_posteriors=carry_posteriors, mode=mode,
        )
    if policy == POLICY_INDEPENDENT:
        return run_independent(env, m_agents, horizon, seed=seed, c=c, mode=mode)
    if policy == POLICY_VANILLA:
        return run_vanilla(env, m_agents, horizon, seed=seed, mode=mode)
    raise ConfigError(f"unknown policy {policy!r}")
