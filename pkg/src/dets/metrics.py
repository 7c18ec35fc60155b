"""Regret accounting over traces and computable bound expressions.

Regret is pseudo-regret: each pull contributes its arm's suboptimality gap,
so R(t) = sum_k gap_k * N(k, t) holds as an exact identity. All curve and
decomposition code funnels through `regret_from_counts` (a fixed-order dot
product over exact integer counts) to keep that identity bitwise true.

Bound expressions take natural logarithms throughout and expose their
undetermined constants as inputs; outputs are meaningful up to those
constants. Arms with zero gap are skipped (marker, not infinity), and
expressions whose log argument carries no information return a marker too.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bandit import BanditInstance, best_arm, gap
from .errors import TraceError
from .trace import Trace

# Markers returned instead of numbers when a bound expression does not apply.
ZERO_GAP = "zero-gap"  # best arms are excluded from 1/gap^2 expressions
VACUOUS = "vacuous"  # log argument <= 1: the expression carries no information
UNDEFINED = "undefined"  # inputs outside the expression's domain

BoundValue = float | str


@dataclass(frozen=True)
class BoundInputs:
    m_agents: int
    k: int
    horizon: int
    d: int
    gaps: tuple[float, ...]
    C: float = 1.0
    C2: float = 1.0
    C2_prime: float = 1.0
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        for name in ("C", "C2", "C2_prime", "c1", "c2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"constant {name} must be positive")
        if any(g < 0 or g > 1 for g in self.gaps):
            raise ValueError("gaps must lie in [0, 1]")


def bound_inputs_for(instance: BanditInstance, m_agents: int, horizon: int,
                     d: int, **constants) -> BoundInputs:
    gaps = tuple(gap(instance, a) for a in range(instance.k))
    return BoundInputs(m_agents, instance.k, horizon, d, gaps, **constants)


def _check_trace(trace: Trace, k: int) -> None:
    if len(trace) and (trace.arm.min() < 0 or trace.arm.max() >= k):
        raise TraceError(f"trace references arms outside [0, {k})")


def regret_from_counts(counts, gaps) -> float:
    """Fixed-order dot of per-arm pull counts with gaps.

    Both sides of the R(t) identity must use this same accumulation order for
    the zero-tolerance equality to be meaningful.
    """
    total = 0.0
    for g, n in zip(gaps, counts):
        total += g * float(n)
    return total


def _cumulative_counts(trace: Trace, k: int) -> np.ndarray:
    """N(k, t) for t = 1..max_round as an integer (T, k) matrix."""
    horizon = trace.max_round()
    counts = np.zeros((horizon, k), np.int64)
    np.add.at(counts, (trace.t - 1, trace.arm), 1)
    return np.cumsum(counts, axis=0)


def cumulative_regret(trace: Trace, instance: BanditInstance) -> np.ndarray:
    """R(t) for t = 1..max_round; nonnegative and nondecreasing."""
    _check_trace(trace, instance.k)
    gaps = [gap(instance, a) for a in range(instance.k)]
    counts = _cumulative_counts(trace, instance.k)
    r = np.zeros(len(counts))
    for a, g in enumerate(gaps):
        r += g * counts[:, a]
    return r


def realized_regret(trace: Trace, instance: BanditInstance) -> np.ndarray:
    """Cumulative (best mean - realized reward); the secondary regret column."""
    _check_trace(trace, instance.k)
    mu_star = instance.means[best_arm(instance)]
    horizon = trace.max_round()
    per_round = np.zeros(horizon)
    np.add.at(per_round, trace.t - 1, mu_star - trace.reward.astype(np.float64))
    return np.cumsum(per_round)


def pull_counts(trace: Trace, k: int, t: int | None = None) -> np.ndarray:
    """Per-arm pull counts over all agents up to round t (whole trace if None)."""
    _check_trace(trace, k)
    if t is None:
        arms = trace.arm
    else:
        if t > trace.max_round():
            raise ValueError(f"t={t} exceeds the trace's last round {trace.max_round()}")
        arms = trace.arm[trace.t <= t]
    return np.bincount(arms, minlength=k).astype(np.int64)


def regret_by_stage(trace: Trace, instance: BanditInstance,
                    d: int | None = None) -> tuple[float, float]:
    """Split R(T) at the stage boundary using the trace's stage labels.

    The second part is computed as R(T) minus the first so the two parts sum
    to R(T) exactly; it matches the directly-accumulated stage-2 value to
    floating-point accuracy (unit-tested). When `d` is given, the stage labels
    are cross-checked against it.
    """
    _check_trace(trace, instance.k)
    gaps = [gap(instance, a) for a in range(instance.k)]
    stage1 = trace.stage == 1
    if d is not None:
        in_budget = trace.t <= d
        if not np.array_equal(stage1, in_budget):
            raise TraceError(f"stage labels disagree with a stage boundary at t={d}")
    counts1 = np.bincount(trace.arm[stage1], minlength=instance.k)
    counts_all = np.bincount(trace.arm, minlength=instance.k)
    total = regret_from_counts(counts_all, gaps)
    part1 = regret_from_counts(counts1, gaps)
    return part1, total - part1


@dataclass(frozen=True)
class PhaseCountBounds:
    stage1_min: BoundValue  # guaranteed completed burn-in phases, floor(log4 ...)
    stage1_max: BoundValue  # ceiling counterpart
    stage2_cap: BoundValue  # 4 + 5 ln(MK), cap on cooperative phases


def phase_count_bounds(inputs: BoundInputs) -> PhaseCountBounds:
    mk = inputs.m_agents * inputs.k
    if mk < 2:
        return PhaseCountBounds(UNDEFINED, UNDEFINED, UNDEFINED)
    log_mk = math.log(mk)

    def log4_count(constant: float, round_fn) -> BoundValue:
        arg = inputs.d / (constant * inputs.k * log_mk)
        if arg < 1.0:
            return UNDEFINED
        return float(round_fn(math.log(arg) / math.log(4.0)))

    return PhaseCountBounds(
        stage1_min=log4_count(inputs.C2, math.floor),
        stage1_max=log4_count(inputs.C2_prime, math.ceil),
        stage2_cap=4.0 + 5.0 * log_mk,
    )


def _log_gap_term(inputs: BoundInputs, arm: int) -> BoundValue:
    """ln(M K T gap^2) / gap^2 with the shared marker conventions."""
    g = inputs.gaps[arm]
    if g <= 0.0:
        return ZERO_GAP
    arg = inputs.m_agents * inputs.k * inputs.horizon * g * g
    if arg <= 1.0:
        return VACUOUS
    return math.log(arg) / (g * g)


def stage1_pull_bound(inputs: BoundInputs, arm: int) -> BoundValue:
    """Cap on a suboptimal arm's total pulls across agents during burn-in."""
    term = _log_gap_term(inputs, arm)
    if isinstance(term, str):
        return term
    return inputs.C * inputs.m_agents * term


def stage2_pull_bound(inputs: BoundInputs, arm: int, slack: float = 0.0) -> BoundValue:
    """Cap on a suboptimal arm's pulls after reallocation, plus a slack term."""
    if slack < 0:
        raise ValueError("slack must be nonnegative")
    term = _log_gap_term(inputs, arm)
    if isinstance(term, str):
        return term
    return inputs.C2 * term + slack


def check_slack_budget(slacks, m_agents: int) -> None:
    """The per-arm slacks may sum to at most M ln M across the whole instance."""
    budget = m_agents * math.log(m_agents) if m_agents > 1 else 0.0
    total = float(sum(slacks))
    if total > budget + 1e-12:
        raise ValueError(
            f"slack terms sum to {total:.6g}, above the budget M ln M = {budget:.6g}"
        )


def stage_regret_bounds(inputs: BoundInputs) -> tuple[BoundValue, BoundValue]:
    """Order-level regret caps for the two stages, up to the c1/c2 constants."""
    if inputs.d < 2 or inputs.horizon < 2:
        return UNDEFINED, UNDEFINED
    positive = [g for g in inputs.gaps if g > 0.0]
    log_d = math.log(inputs.d)
    log_t = math.log(inputs.horizon)
    log_kt = math.log(inputs.k * inputs.horizon)
    stage1 = inputs.c1 * inputs.m_agents * sum(log_d / g**2 for g in positive) ** 2
    stage2 = inputs.c2 * inputs.m_agents * sum(log_t * log_kt / g for g in positive)
    return stage1, stage2
