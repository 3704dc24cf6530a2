"""Flat ``key = value`` experiment configuration files.

One setting per line, ``#`` starts a comment, keys use dashes.  Exactly
one of ``beta-sqrt`` (fixed confidence scaling) and ``delta``
(theoretical schedule) must be present.  Grid counts, ranges, and the
acquisition knobs fall back to the problem defaults when omitted.
"""

from __future__ import annotations

from pathlib import Path

from .acquisition import AcquisitionConfig, AcquisitionKind, ComputationPath
from .bands import AccuracyParams, BetaSchedule
from .gp import KernelSpec
from .harness import AmbiguityDescriptor, ExperimentConfig
from .problems import BenchmarkSpec, PROBLEM_NAMES

_KNOWN_KEYS = {
    "problem",
    "metric",
    "reference",
    "epsilon",
    "h",
    "alpha",
    "eta",
    "beta-sqrt",
    "delta",
    "sigma2",
    "sigma-f2",
    "length-scale",
    "acquisition",
    "gamma",
    "gamma-tilde",
    "zeta-per-region",
    "iterations",
    "grid-n1",
    "grid-n2",
    "range-l1",
    "range-u1",
    "range-l2",
    "range-u2",
    "computation-path",
    "naive-m",
}

_REQUIRED_KEYS = (
    "problem",
    "metric",
    "epsilon",
    "h",
    "alpha",
    "sigma2",
    "sigma-f2",
    "length-scale",
    "acquisition",
    "iterations",
)


class ConfigError(ValueError):
    """Malformed or inconsistent configuration file."""


def parse_config_text(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return mapping


def build_experiment(mapping: dict[str, str]) -> ExperimentConfig:
    missing = [key for key in _REQUIRED_KEYS if key not in mapping]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    if ("beta-sqrt" in mapping) == ("delta" in mapping):
        raise ConfigError("set exactly one of beta-sqrt and delta")

    def fnum(key: str, default: float | None = None) -> float:
        if key not in mapping:
            return default
        try:
            return float(mapping[key])
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not a number: {mapping[key]!r}") from exc

    def inum(key: str, default: int | None = None) -> int:
        if key not in mapping:
            return default
        try:
            return int(mapping[key])
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: not an integer: {mapping[key]!r}") from exc

    name = mapping["problem"].lower()
    if name not in PROBLEM_NAMES:
        raise ConfigError(f"unknown problem {mapping['problem']!r}")

    ranges = {}
    if "range-l1" in mapping or "range-u1" in mapping:
        ranges["design_range"] = (fnum("range-l1"), fnum("range-u1"))
    if "range-l2" in mapping or "range-u2" in mapping:
        ranges["env_range"] = (fnum("range-l2"), fnum("range-u2"))
    try:
        problem = BenchmarkSpec(
            name=name,
            n_design=inum("grid-n1", 50),
            n_env=inum("grid-n2", 50),
            **ranges,
        )
        kernel = KernelSpec(
            signal_variance=fnum("sigma-f2"),
            length_scale=fnum("length-scale"),
            noise_variance=fnum("sigma2"),
        )
        if "beta-sqrt" in mapping:
            beta = BetaSchedule.fixed(fnum("beta-sqrt"))
        else:
            beta = BetaSchedule.theoretical(fnum("delta"))
        accuracy = AccuracyParams(
            threshold=fnum("h"),
            alpha=fnum("alpha"),
            beta=beta,
            eta=fnum("eta", 0.0),
        )
        ambiguity = AmbiguityDescriptor(
            metric=mapping["metric"].lower(),
            epsilon=fnum("epsilon"),
            reference=mapping.get("reference", "uniform").lower(),
        )
        acquisition = AcquisitionConfig(
            kind=AcquisitionKind(mapping["acquisition"].lower()),
            gamma=fnum("gamma", 0.01),
            gamma_tilde=fnum("gamma-tilde", 0.01),
            zeta_per_region=fnum("zeta-per-region", 0.005),
            path=ComputationPath(mapping.get("computation-path", "approx").lower()),
            naive_m=inum("naive-m", 1000),
        )
        return ExperimentConfig(
            problem=problem,
            kernel=kernel,
            accuracy=accuracy,
            ambiguity=ambiguity,
            acquisition=acquisition,
            iterations=inum("iterations"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    return build_experiment(parse_config_text(Path(path).read_text()))
