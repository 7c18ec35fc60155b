"""Command-line entry point.

Exit codes: 0 all seeds completed and all files written, 2 invalid
configuration, 3 output I/O failure.
"""

import argparse
import sys

from .config import (
    EXECUTION_MODES,
    POOLING_MODES,
    _parse_float_list,
    _parse_int_list,
    _parse_str_list,
    parse_config_file,
    resolve_config,
)
from .coordination import POLICIES
from .errors import ConfigError
from .harness import run_experiment


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dets",
        description=(
            "Deterministic multi-agent Bernoulli-bandit simulator: phased "
            "elimination Thompson sampling with optional coordination, "
            "plus regret accounting and bound diagnostics."
        ),
    )
    p.add_argument("--config", metavar="FILE", help="flat key=value config file")
    p.add_argument("--policy", metavar="LIST",
                   help=f"comma-separated policies from {', '.join(POLICIES)}")
    p.add_argument("--means", metavar="LIST",
                   help="comma-separated per-arm success probabilities")
    p.add_argument("--K", type=int, help="number of arms (with --best-mean/--gap)")
    p.add_argument("--best-mean", type=float, dest="best_mean",
                   help="best arm's mean for the uniform-gap generator")
    p.add_argument("--gap", type=float, help="uniform gap for the generator")
    p.add_argument("--M", type=int, help="number of agents")
    p.add_argument("--T", type=int, help="per-agent horizon in rounds")
    p.add_argument("--seed", type=int, help="single seed, or base for --seed-count")
    p.add_argument("--seeds", metavar="LIST", help="comma-separated seed list")
    p.add_argument("--seed-count", type=int, dest="seed_count",
                   help="number of consecutive seeds starting at --seed")
    p.add_argument("--c", type=float, help="phase-length constant (default 0.5)")
    p.add_argument("--C", type=float, help="stage-1 pull-bound constant")
    p.add_argument("--C2", type=float, help="stage-2 pull-bound / phase-count constant")
    p.add_argument("--C2-prime", type=float, dest="C2_prime",
                   help="phase-count upper constant")
    p.add_argument("--c1", type=float, help="stage-1 regret-bound constant")
    p.add_argument("--c2", type=float, help="stage-2 regret-bound constant")
    p.add_argument("--pooling", choices=POOLING_MODES,
                   help="how stage-1 survivor sets pool (default union)")
    p.add_argument("--carry-posteriors", action="store_true", default=None,
                   help="carry stage-1 posterior counts into stage 2")
    p.add_argument("--emit-messages", action="store_true", default=None,
                   help="also write the protocol log as JSON lines")
    p.add_argument("--mode", choices=EXECUTION_MODES,
                   help="agent execution mode (default sequential)")
    p.add_argument("--out-dir", dest="out_dir", help="output directory (default runs)")
    return p


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides: dict = {}
    if args.policy is not None:
        overrides["policy"] = _parse_str_list(args.policy)
    if args.means is not None:
        overrides["means"] = _parse_float_list(args.means)
    if args.seeds is not None:
        overrides["seeds"] = _parse_int_list(args.seeds)
    for key in ("K", "best_mean", "gap", "M", "T", "seed", "seed_count", "c",
                "C", "C2", "C2_prime", "c1", "c2", "pooling",
                "carry_posteriors", "emit_messages", "mode", "out_dir"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    return overrides


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if args.config else {}
        config = resolve_config(file_values, _overrides_from_args(args))
    except ConfigError as exc:
        print(f"dets: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"dets: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        written = run_experiment(config)
    except OSError as exc:
        print(f"dets: output error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(written)} files to {config.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
