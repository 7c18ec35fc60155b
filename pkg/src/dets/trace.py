"""Columnar pull logs.

A trace holds one row per pull: (t, agent, arm, reward, stage, phase), where t
is the agent-local round index counting from 1. Runners assemble traces in the
canonical order (stage, phase, agent id, pull order within the agent), which
makes output files identical whether agents executed sequentially or in
threads.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class PullBlock:
    """A contiguous run of pulls of one arm by one agent within one phase."""

    agent: int
    arm: int
    stage: int
    phase: int
    t_start: int  # agent-local round of the first pull, 1-based
    rewards: np.ndarray  # int8, one entry per pull

    def __len__(self) -> int:
        return len(self.rewards)


@dataclass
class Trace:
    t: np.ndarray = field(default_factory=lambda: np.empty(0, np.int64))
    agent: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))
    arm: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))
    reward: np.ndarray = field(default_factory=lambda: np.empty(0, np.int8))
    stage: np.ndarray = field(default_factory=lambda: np.empty(0, np.int8))
    phase: np.ndarray = field(default_factory=lambda: np.empty(0, np.int32))

    def __len__(self) -> int:
        return len(self.t)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("t", "agent", "arm", "reward", "stage", "phase")
        )

    def max_round(self) -> int:
        return int(self.t.max()) if len(self) else 0

    def rounds_per_agent(self, m_agents: int) -> list[int]:
        return [int(np.sum(self.agent == i)) for i in range(m_agents)]

    def as_int_matrix(self) -> np.ndarray:
        """Rows of (t, agent, arm, reward, stage, phase) as int64."""
        return np.column_stack(
            [
                self.t.astype(np.int64),
                self.agent.astype(np.int64),
                self.arm.astype(np.int64),
                self.reward.astype(np.int64),
                self.stage.astype(np.int64),
                self.phase.astype(np.int64),
            ]
        )


def trace_from_blocks(blocks: list[PullBlock]) -> Trace:
    """Concatenate blocks in the given (already canonical) order."""
    if not blocks:
        return Trace()
    n = sum(len(b) for b in blocks)
    t = np.empty(n, np.int64)
    agent = np.empty(n, np.int32)
    arm = np.empty(n, np.int32)
    reward = np.empty(n, np.int8)
    stage = np.empty(n, np.int8)
    phase = np.empty(n, np.int32)
    pos = 0
    for b in blocks:
        m = len(b)
        sl = slice(pos, pos + m)
        t[sl] = np.arange(b.t_start, b.t_start + m, dtype=np.int64)
        agent[sl] = b.agent
        arm[sl] = b.arm
        reward[sl] = b.rewards
        stage[sl] = b.stage
        phase[sl] = b.phase
        pos += m
    return Trace(t, agent, arm, reward, stage, phase)


def concat_traces(traces: list[Trace]) -> Trace:
    parts = [tr for tr in traces if len(tr)]
    if not parts:
        return Trace()
    return Trace(
        np.concatenate([tr.t for tr in parts]),
        np.concatenate([tr.agent for tr in parts]),
        np.concatenate([tr.arm for tr in parts]),
        np.concatenate([tr.reward for tr in parts]),
        np.concatenate([tr.stage for tr in parts]),
        np.concatenate([tr.phase for tr in parts]),
    )
