"""Experiment configuration: the flat config-file format, flag overrides,
validation, and the fully-resolved echo embedded in every output file.

Config files are plain text, one `key = value` per line. `#` starts a
comment, blank lines are skipped, and list values are comma-separated:

    means = 0.9,0.5,0.4,0.1
    M = 2
    T = 200000
    policy = distributed-ets
    seeds = 1,2,3

Flags override file values. Either give `means` explicitly or describe a
uniform-gap instance with `K`, `best_mean` and `gap`.
"""

from dataclasses import dataclass, fields
from pathlib import Path

from .bandit import generate_means
from .coordination import POLICIES
from .errors import ConfigError

POOLING_MODES = ("union", "intersection")
EXECUTION_MODES = ("sequential", "threaded")

# Every key accepted in a config file or as a CLI override, with its parser.
_BOOL_WORDS = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL_WORDS[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}") from None


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_str_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


_KEY_PARSERS = {
    "means": _parse_float_list,
    "K": int,
    "best_mean": float,
    "gap": float,
    "M": int,
    "T": int,
    "policy": _parse_str_list,
    "c": float,
    "C": float,
    "C2": float,
    "C2_prime": float,
    "c1": float,
    "c2": float,
    "seed": int,
    "seeds": _parse_int_list,
    "seed_count": int,
    "pooling": str.strip,
    "carry_posteriors": _parse_bool,
    "emit_messages": _parse_bool,
    "mode": str.strip,
    "out_dir": str.strip,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully-resolved experiment description; validated on construction."""

    means: tuple[float, ...]
    m_agents: int
    horizon: int
    policies: tuple[str, ...]
    seeds: tuple[int, ...]
    c: float = 0.5
    C: float = 1.0
    C2: float = 1.0
    C2_prime: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    pooling: str = "union"
    carry_posteriors: bool = False
    emit_messages: bool = False
    mode: str = "sequential"
    out_dir: str = "runs"

    @property
    def k(self) -> int:
        return len(self.means)

    def __post_init__(self):
        if not self.means:
            raise ConfigError("means: at least one arm is required")
        for i, mu in enumerate(self.means):
            if not 0.0 <= mu <= 1.0:
                raise ConfigError(f"means: arm {i} has mean {mu}, outside [0, 1]")
        if self.m_agents < 1:
            raise ConfigError(f"M: must be >= 1, got {self.m_agents}")
        if self.horizon < 2:
            raise ConfigError(f"T: must be >= 2, got {self.horizon}")
        if not self.policies:
            raise ConfigError("policy: at least one policy is required")
        for p in self.policies:
            if p not in POLICIES:
                raise ConfigError(f"policy: unknown policy {p!r}, expected one of {POLICIES}")
        if len(set(self.policies)) != len(self.policies):
            raise ConfigError("policy: duplicate policy names")
        if "distributed-ets" in self.policies and self.horizon < self.m_agents * self.k:
            raise ConfigError(
                f"T: distributed-ets needs T >= M*K = {self.m_agents * self.k}, "
                f"got {self.horizon}"
            )
        if not self.seeds:
            raise ConfigError("seeds: the seed list must be nonempty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds: duplicate seeds")
        for name in ("c", "C", "C2", "C2_prime", "c1", "c2"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}: must be positive, got {getattr(self, name)}")
        if self.pooling not in POOLING_MODES:
            raise ConfigError(f"pooling: expected one of {POOLING_MODES}, got {self.pooling!r}")
        if self.mode not in EXECUTION_MODES:
            raise ConfigError(f"mode: expected one of {EXECUTION_MODES}, got {self.mode!r}")

    def to_dict(self) -> dict:
        """Echo of every field, defaulted or not, for output provenance."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = list(value) if isinstance(value, tuple) else value
        out["K"] = self.k
        return out


def parse_config_file(path: str | Path) -> dict:
    """Parse the flat key=value format into typed values."""
    values: dict = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](value.strip())
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


def resolve_config(file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge config-file values with flag overrides and build the config.

    Overrides win key-by-key. Seeds resolve from, in order of preference:
    an explicit `seeds` list, or `seed` (optionally expanded to `seed_count`
    consecutive seeds).
    """
    merged: dict = {}
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if value is not None:
                merged[key] = value

    for key in merged:
        if key not in _KEY_PARSERS:
            raise ConfigError(f"unknown config key {key!r}")

    if "means" in merged:
        means = tuple(float(m) for m in merged["means"])
        if "K" in merged and merged["K"] != len(means):
            raise ConfigError(
                f"K: given K={merged['K']} but means lists {len(means)} arms"
            )
    elif {"K", "best_mean", "gap"} <= merged.keys():
        try:
            means = generate_means(merged["K"], merged["best_mean"], merged["gap"])
        except ValueError as exc:
            raise ConfigError(f"gap: {exc}") from None
    else:
        raise ConfigError(
            "means: give an explicit mean list, or K with best_mean and gap"
        )

    if "seeds" in merged:
        seeds = tuple(merged["seeds"])
    elif "seed" in merged:
        base = merged["seed"]
        count = merged.get("seed_count", 1)
        if count < 1:
            raise ConfigError(f"seed_count: must be >= 1, got {count}")
        seeds = tuple(range(base, base + count))
    else:
        raise ConfigError("seeds: give seeds, or seed (optionally with seed_count)")

    kwargs = {
        "means": means,
        "m_agents": merged.get("M", 1),
        "horizon": merged.get("T", 0),
        "policies": tuple(merged.get("policy", ("distributed-ets",))),
        "seeds": seeds,
    }
    if "T" not in merged:
        raise ConfigError("T: the horizon is required")
    if "M" not in merged:
        raise ConfigError("M: the number of agents is required")
    for key in ("c", "C", "C2", "C2_prime", "c1", "c2", "pooling",
                "carry_posteriors", "emit_messages", "mode", "out_dir"):
        if key in merged:
            kwargs[key] = merged[key]
    return ExperimentConfig(**kwargs)
