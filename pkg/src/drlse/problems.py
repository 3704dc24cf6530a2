"""Benchmark black boxes, the SIR risk simulator, and reference pmfs.

The four synthetic benchmarks treat the first coordinate as the design
variable and the second as the environment variable.  The epidemic
problem maps both rescaled coordinates from [-1, 1] to raw infection and
recovery rates, integrates the SIR dynamics with a forward difference,
and reports the peak infected count minus an economic credit 150 * x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ambiguity import ReferenceDistribution
from .grid import GridDomain

BOOTH = "booth"
MATYAS = "matyas"
MCCORMICK = "mccormick"
STYBLINSKI_TANG = "styblinski-tang"
SIR = "sir"

PROBLEM_NAMES = (BOOTH, MATYAS, MCCORMICK, STYBLINSKI_TANG, SIR)

UNIFORM = "uniform"
NORMAL = "normal"
SIR_NORMAL = "sir-normal"

#: Default rectangle [L1, U1] x [L2, U2] per problem.
DEFAULT_RANGES = {
    BOOTH: ((-10.0, 10.0), (-10.0, 10.0)),
    MATYAS: ((-10.0, 10.0), (-10.0, 10.0)),
    MCCORMICK: ((-1.5, 4.0), (-3.0, 4.0)),
    STYBLINSKI_TANG: ((-10.0, 10.0), (-10.0, 10.0)),
    SIR: ((-1.0, 1.0), (-1.0, 1.0)),
}


@dataclass(frozen=True)
class SirParams:
    """Epidemic simulator internals (all configurable).

    ``infection_range`` and ``recovery_range`` are the affine images of
    the rescaled inputs x, w in [-1, 1].
    """

    population: float = 1000.0
    initial_infected: float = 10.0
    horizon: int = 1000
    dt: float = 0.1
    infection_range: tuple[float, float] = (0.1, 0.5)
    recovery_range: tuple[float, float] = (0.1, 0.5)
    economic_weight: float = 150.0

    def __post_init__(self):
        if not self.population >= self.initial_infected >= 1.0:
            raise ValueError("need population >= initial_infected >= 1")
        if self.dt <= 0.0 or self.horizon < 1:
            raise ValueError("dt must be positive and horizon >= 1")
        for lo, hi in (self.infection_range, self.recovery_range):
            if lo < 0.0 or hi < 0.0:
                raise ValueError("rate ranges must be nonnegative")

    def rates(self, x: float, w: float) -> tuple[float, float]:
        """Map rescaled (x, w) in [-1, 1]^2 to raw (infection, recovery)."""
        lo_i, hi_i = self.infection_range
        lo_r, hi_r = self.recovery_range
        beta = lo_i + (hi_i - lo_i) * (x + 1.0) / 2.0
        gamma = lo_r + (hi_r - lo_r) * (w + 1.0) / 2.0
        return beta, gamma


@dataclass(frozen=True)
class BenchmarkSpec:
    """A named problem on a rectangle, with grid counts per axis."""

    name: str
    design_range: tuple[float, float] | None = None
    env_range: tuple[float, float] | None = None
    n_design: int = 50
    n_env: int = 50
    sir: SirParams = field(default_factory=SirParams)

    def __post_init__(self):
        if self.name not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem {self.name!r}")
        if self.design_range is None:
            object.__setattr__(self, "design_range", DEFAULT_RANGES[self.name][0])
        if self.env_range is None:
            object.__setattr__(self, "env_range", DEFAULT_RANGES[self.name][1])
        for lo, hi in (self.design_range, self.env_range):
            if not lo < hi:
                raise ValueError("ranges must satisfy lower < upper")
        if self.n_design < 2 or self.n_env < 2:
            raise ValueError("grid counts must be at least 2")

    def domain(self) -> GridDomain:
        return GridDomain.from_ranges(
            self.design_range, self.env_range, self.n_design, self.n_env
        )


def _check_range(value, bounds, label):
    lo, hi = bounds
    if not lo <= value <= hi:
        raise ValueError(f"{label}={value} outside [{lo}, {hi}]")


def evaluate(spec: BenchmarkSpec, x: float, w: float) -> float:
    """Noiseless black-box value at one (x, w)."""
    _check_range(x, spec.design_range, "x")
    _check_range(w, spec.env_range, "w")
    if spec.name == BOOTH:
        return (x + 2.0 * w - 7.0) ** 2 + (2.0 * x + w - 5.0) ** 2
    if spec.name == MATYAS:
        return 0.26 * (x * x + w * w) - 0.48 * x * w
    if spec.name == MCCORMICK:
        return np.sin(x + w) + (x - w) ** 2 - 1.5 * x + 2.5 * w + 1.0
    if spec.name == STYBLINSKI_TANG:
        return (
            (x**4 - 16.0 * x**2 + 5.0 * x) / 2.0
            + (w**4 - 16.0 * w**2 + 5.0 * w) / 2.0
            - 4000.0
        )
    return sir_risk(spec.sir, x, w)


def evaluate_grid(spec: BenchmarkSpec, domain: GridDomain) -> np.ndarray:
    """Noiseless values at every joint grid point, in joint-index order."""
    if spec.name == SIR:
        return _sir_risk_grid(spec.sir, domain)
    xs = domain.joint_points[:, 0]
    ws = domain.joint_points[:, 1]
    if spec.name == BOOTH:
        return (xs + 2.0 * ws - 7.0) ** 2 + (2.0 * xs + ws - 5.0) ** 2
    if spec.name == MATYAS:
        return 0.26 * (xs * xs + ws * ws) - 0.48 * xs * ws
    if spec.name == MCCORMICK:
        return np.sin(xs + ws) + (xs - ws) ** 2 - 1.5 * xs + 2.5 * ws + 1.0
    return (
        (xs**4 - 16.0 * xs**2 + 5.0 * xs) / 2.0
        + (ws**4 - 16.0 * ws**2 + 5.0 * ws) / 2.0
        - 4000.0
    )


# ---------------------------------------------------------------------
# SIR dynamics
# ---------------------------------------------------------------------

def _sir_peak(params: SirParams, beta, gamma):
    """Peak infected count for arrays of raw rates (forward difference)."""
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    n = params.population
    s = np.full(beta.shape, n - params.initial_infected)
    i = np.full(beta.shape, params.initial_infected)
    peak = i.copy()
    # Divergence (too large a step) is detected after the loop, so let
    # intermediate overflow pass through as inf/nan silently.
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(params.horizon):
            flow = beta * s * i / n * params.dt
            recovered = gamma * i * params.dt
            s = s - flow
            i = i + flow - recovered
            np.maximum(peak, i, out=peak)
    if not (np.isfinite(s).all() and np.isfinite(i).all()):
        raise ValueError(
            "SIR trajectory diverged; the step size dt is too large for "
            "these rates"
        )
    return peak


def sir_risk(params: SirParams, x: float, w: float) -> float:
    """Peak infected count minus the economic credit for design x."""
    for v, label in ((x, "x"), (w, "w")):
        if not -1.0 <= v <= 1.0:
            raise ValueError(f"{label}={v} outside [-1, 1]")
    beta, gamma = params.rates(x, w)
    peak = _sir_peak(params, np.array([beta]), np.array([gamma]))[0]
    return float(peak - params.economic_weight * x)


def _sir_risk_grid(params: SirParams, domain: GridDomain) -> np.ndarray:
    xs = domain.joint_points[:, 0]
    ws = domain.joint_points[:, 1]
    lo_i, hi_i = params.infection_range
    lo_r, hi_r = params.recovery_range
    beta = lo_i + (hi_i - lo_i) * (xs + 1.0) / 2.0
    gamma = lo_r + (hi_r - lo_r) * (ws + 1.0) / 2.0
    peak = _sir_peak(params, beta, gamma)
    return peak - params.economic_weight * xs


# ---------------------------------------------------------------------
# Reference distributions
# ---------------------------------------------------------------------

def reference_pmf(kind: str, env_points) -> ReferenceDistribution:
    """Reference pmf over the environment grid.

    ``normal`` weights points by exp(-|w|^2 / 20) (variance parameter
    10); ``sir-normal`` by exp(-|w|^2 / 0.1) (variance 0.05) for the
    rescaled epidemic grid.  Both are normalized over the grid.
    """
    pts = np.asarray(env_points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("env_points must be a nonempty 1-D or 2-D array")
    sq = np.sum(pts * pts, axis=1)
    if kind == UNIFORM:
        weights = np.ones(sq.shape[0])
    elif kind == NORMAL:
        weights = np.exp(-sq / 20.0)
    elif kind == SIR_NORMAL:
        weights = np.exp(-sq / 0.1)
    else:
        raise ValueError(f"unknown reference kind {kind!r}")
    return ReferenceDistribution(weights / weights.sum())
