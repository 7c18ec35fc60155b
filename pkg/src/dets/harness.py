"""Batch execution across seeds and policies, and output-file emission.

Per (policy, seed) run the harness writes, under deterministic names:

    {policy}_{seed}.trace.csv       one row per pull
    {policy}_{seed}.regret.csv      regret curve, both pseudo and realized
    {policy}_{seed}.summary.json    metrics, bounds, and the resolved config
    {policy}_{seed}.messages.jsonl  protocol log (only with emit_messages)

plus one aggregate.json over all runs. Rerunning the same config produces
byte-identical files; nothing time- or host-dependent is emitted.
"""

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bandit import BanditInstance, best_arm, gap
from .config import ExperimentConfig
from .coordination import POLICY_VANILLA, RunResult, run_policy
from .metrics import (
    bound_inputs_for,
    cumulative_regret,
    phase_count_bounds,
    pull_counts,
    realized_regret,
    regret_by_stage,
    stage1_pull_bound,
    stage2_pull_bound,
    stage_regret_bounds,
)

TRACE_SCHEMA = "dets-trace-v1"
REGRET_SCHEMA = "dets-regret-v1"
SUMMARY_SCHEMA = "dets-summary-v1"
AGGREGATE_SCHEMA = "dets-aggregate-v1"
BOUNDS_NOTE = "bound values hold up to the configured constants"


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_trace_csv(path: Path, result: RunResult) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# {TRACE_SCHEMA}\n")
        fh.write("t,agent,arm,reward,stage,phase\n")
        np.savetxt(fh, result.trace.as_int_matrix(), fmt="%d", delimiter=",")


def write_regret_csv(path: Path, result: RunResult, regret: np.ndarray,
                     realized: np.ndarray) -> None:
    boundary = result.d if result.d is not None else len(regret)
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# {REGRET_SCHEMA}\n")
        fh.write("t,regret,regret_realized,stage\n")
        fh.writelines(
            f"{t + 1},{regret[t]!r},{realized[t]!r},{1 if t + 1 <= boundary else 2}\n"
            for t in range(len(regret))
        )


def write_messages_jsonl(path: Path, result: RunResult) -> None:
    with open(path, "w", newline="\n") as fh:
        for msg in result.messages:
            fh.write(json.dumps(asdict(msg), sort_keys=True) + "\n")


def _bounds_block(config: ExperimentConfig, instance: BanditInstance,
                  result: RunResult) -> dict | None:
    if result.d is None:
        return None
    inputs = bound_inputs_for(
        instance, config.m_agents, config.horizon, result.d,
        C=config.C, C2=config.C2, C2_prime=config.C2_prime,
        c1=config.c1, c2=config.c2,
    )
    counts = phase_count_bounds(inputs)
    s1, s2 = stage_regret_bounds(inputs)
    return {
        "note": BOUNDS_NOTE,
        "phase_counts": {
            "stage1_min": counts.stage1_min,
            "stage1_max": counts.stage1_max,
            "stage2_cap": counts.stage2_cap,
        },
        "stage1_pulls_per_arm": [stage1_pull_bound(inputs, a) for a in range(instance.k)],
        "stage2_pulls_per_arm": [stage2_pull_bound(inputs, a) for a in range(instance.k)],
        "stage_regret": {"stage1": s1, "stage2": s2},
    }


def build_summary(config: ExperimentConfig, instance: BanditInstance,
                  result: RunResult, regret: np.ndarray,
                  realized: np.ndarray) -> dict:
    star = best_arm(instance)
    stage1_part, stage2_part = regret_by_stage(result.trace, instance)
    counts = pull_counts(result.trace, instance.k)
    summary = {
        "schema": SUMMARY_SCHEMA,
        "policy": result.policy,
        "seed": result.seed,
        "config": config.to_dict(),
        "instance": {
            "means": list(instance.means),
            "best_arm": star,
            "gaps": [gap(instance, a) for a in range(instance.k)],
        },
        "results": {
            "final_regret": float(regret[-1]) if len(regret) else 0.0,
            "final_regret_realized": float(realized[-1]) if len(realized) else 0.0,
            "regret_by_stage": {"stage1": stage1_part, "stage2": stage2_part},
            "pull_counts": [int(n) for n in counts],
            "pulls_by_agent": list(result.pulls_by_agent),
            "rounds_per_agent": result.trace.rounds_per_agent(config.m_agents),
            "d": result.d,
            "stage1_phases_completed": result.stage1_phases,
            "stage2_start_phase": result.stage2_start,
            "stage2_phases_completed": result.stage2_phases,
            "survivors": result.survivors,
            "survivors_by_agent": result.survivors_by_agent,
            "best_arm_survived": (
                None if result.survivors is None else star in result.survivors
            ),
            "pooled_survivors": result.pooled,
            "allocation": (
                None if result.allocation is None
                else [list(a) for a in result.allocation.assignments]
            ),
            "message_counts": result.message_counts(),
            "posteriors": [
                [{"successes": c.successes, "failures": c.failures} for c in per_agent]
                for per_agent in result.posteriors
            ],
        },
        "bounds": _bounds_block(config, instance, result),
    }
    return summary


def run_experiment(config: ExperimentConfig) -> list[Path]:
    """Run every (policy, seed) pair and write all output files."""
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instance = BanditInstance(config.means)
    star = best_arm(instance)
    written: list[Path] = []
    final_regret: dict[str, list[float]] = {}
    survival: dict[str, list[bool] | None] = {}
    message_totals: dict[str, list[int]] = {}

    for policy in config.policies:
        final_regret[policy] = []
        survival[policy] = None if policy == POLICY_VANILLA else []
        message_totals[policy] = []
        for seed in config.seeds:
            result = run_policy(
                policy, instance, config.m_agents, config.horizon,
                seed=seed, c=config.c, pooling=config.pooling,
                carry_posteriors=config.carry_posteriors, mode=config.mode,
            )
            regret = cumulative_regret(result.trace, instance)
            realized = realized_regret(result.trace, instance)

            base = f"{policy}_{seed}"
            trace_path = out_dir / f"{base}.trace.csv"
            write_trace_csv(trace_path, result)
            regret_path = out_dir / f"{base}.regret.csv"
            write_regret_csv(regret_path, result, regret, realized)
            summary_path = out_dir / f"{base}.summary.json"
            _dump_json(summary_path, build_summary(config, instance, result, regret, realized))
            written += [trace_path, regret_path, summary_path]
            if config.emit_messages:
                messages_path = out_dir / f"{base}.messages.jsonl"
                write_messages_jsonl(messages_path, result)
                written.append(messages_path)

            final_regret[policy].append(float(regret[-1]) if len(regret) else 0.0)
            if survival[policy] is not None:
                survival[policy].append(star in result.survivors)
            message_totals[policy].append(len(result.messages))

    per_policy = {}
    for policy in config.policies:
        finals = final_regret[policy]
        per_policy[policy] = {
            "final_regret_by_seed": finals,
            "mean_final_regret": float(np.mean(finals)),
            "std_final_regret": float(np.std(finals)),
            "best_arm_survival_rate": (
                None if survival[policy] is None
                else float(np.mean(survival[policy]))
            ),
            "mean_messages": float(np.mean(message_totals[policy])),
        }
    paired = []
    for i, pa in enumerate(config.policies):
        for pb in config.policies[i + 1:]:
            diffs = [a - b for a, b in zip(final_regret[pa], final_regret[pb])]
            paired.append({
                "policy_a": pa,
                "policy_b": pb,
                "regret_diff_by_seed": diffs,
                "mean_regret_diff": float(np.mean(diffs)),
            })
    aggregate = {
        "schema": AGGREGATE_SCHEMA,
        "config": config.to_dict(),
        "seeds": list(config.seeds),
        "per_policy": per_policy,
        "paired": paired,
    }
    aggregate_path = out_dir / "aggregate.json"
    _dump_json(aggregate_path, aggregate)
    written.append(aggregate_path)
    return written
