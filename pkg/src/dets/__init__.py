"""Deterministic multi-agent Bernoulli-bandit simulation.

M agents run phased elimination Thompson sampling on a shared K-armed
instance, either independently or coordinated through a simulated central
server (burn-in, arm reallocation, per-phase max broadcast). Includes a
per-pull Thompson-sampling baseline, pseudo-regret accounting, and
computable forms of the phase-count, pull-count, and regret bounds.
"""

from .bandit import BanditInstance, best_arm, gap, generate_means, pull, pull_many
from .config import ExperimentConfig, parse_config_file, resolve_config
from .coordination import (
    POLICIES,
    POLICY_DISTRIBUTED,
    POLICY_INDEPENDENT,
    POLICY_VANILLA,
    Allocation,
    Message,
    RunResult,
    aggregate_max,
    allocate_arms,
    run_distributed,
    run_independent,
    run_policy,
    run_vanilla,
)
from .errors import ConfigError, ProtocolError, TraceError
from .harness import run_experiment
from .metrics import (
    UNDEFINED,
    VACUOUS,
    ZERO_GAP,
    BoundInputs,
    bound_inputs_for,
    check_slack_budget,
    cumulative_regret,
    phase_count_bounds,
    pull_counts,
    realized_regret,
    regret_by_stage,
    regret_from_counts,
    stage1_pull_bound,
    stage2_pull_bound,
    stage_regret_bounds,
)
from .posterior import BetaCounts, bernoulli_round, record, sample_theta
from .rng import RngStream
from .trace import PullBlock, Trace

__all__ = [
    "Allocation",
    "BanditInstance",
    "BetaCounts",
    "BoundInputs",
    "ConfigError",
    "ExperimentConfig",
    "Message",
    "POLICIES",
    "POLICY_DISTRIBUTED",
    "POLICY_INDEPENDENT",
    "POLICY_VANILLA",
    "ProtocolError",
    "PullBlock",
    "RngStream",
    "RunResult",
    "Trace",
    "TraceError",
    "UNDEFINED",
    "VACUOUS",
    "ZERO_GAP",
    "aggregate_max",
    "allocate_arms",
    "bernoulli_round",
    "best_arm",
    "bound_inputs_for",
    "check_slack_budget",
    "cumulative_regret",
    "gap",
    "generate_means",
    "parse_config_file",
    "phase_count_bounds",
    "pull",
    "pull_counts",
    "pull_many",
    "realized_regret",
    "record",
    "regret_by_stage",
    "regret_from_counts",
    "resolve_config",
    "run_distributed",
    "run_experiment",
    "run_independent",
    "run_policy",
    "run_vanilla",
    "sample_theta",
    "stage1_pull_bound",
    "stage2_pull_bound",
    "stage_regret_bounds",
]
