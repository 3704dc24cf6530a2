"""Credible intervals, indicator bands, and grid classification.

From the surrogate's mean/variance this module builds, in order:

1. per-point credible intervals [mu - b*sd, mu + b*sd] for f,
2. three-valued bands for the exceedance indicator 1[f > h] with an
   accuracy margin eta,
3. worst-case bounds (lower_f, upper_f) on the robust exceedance
   probability of each design point, via the ambiguity module,
4. the partition of design points into confidently-above,
   confidently-below, and undecided sets against the probability
   threshold alpha.

Boundary convention: a design point is classified above on a strict
``lower_f > alpha`` and below on an inclusive ``upper_f <= alpha``;
equality lands in the below set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ambiguity import AmbiguitySet, binary_masses
from .gp import GpPosterior


class IndicatorBand(Enum):
    """Interval for 1[f > h]; one of [0,0], [0,1], [1,1]."""

    ZERO = "zero"
    UNKNOWN = "unknown"
    UNIT = "unit"


@dataclass(frozen=True)
class BetaSchedule:
    """Confidence scaling sequence, either fixed or the theoretical one.

    The theoretical mode computes beta_t = 2*log(grid_size * pi^2 * t^2 /
    (3*delta)) and returns its square root; t counts completed
    observations, with t = 0 promoted to 1 so the schedule is defined
    before any data arrives.
    """

    fixed_beta_sqrt: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if (self.fixed_beta_sqrt is None) == (self.delta is None):
            raise ValueError("set exactly one of fixed_beta_sqrt and delta")
        if self.fixed_beta_sqrt is not None and self.fixed_beta_sqrt < 0.0:
            raise ValueError("fixed beta_sqrt must be nonnegative")
        if self.delta is not None and not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")

    @classmethod
    def fixed(cls, beta_sqrt: float) -> "BetaSchedule":
        return cls(fixed_beta_sqrt=beta_sqrt)

    @classmethod
    def theoretical(cls, delta: float) -> "BetaSchedule":
        return cls(delta=delta)

    def beta_sqrt(self, n_obs: int, grid_size: int) -> float:
        if self.fixed_beta_sqrt is not None:
            return self.fixed_beta_sqrt
        t = max(n_obs, 1)
        beta = 2.0 * math.log(grid_size * math.pi**2 * t**2 / (3.0 * self.delta))
        return math.sqrt(beta)


@dataclass(frozen=True)
class AccuracyParams:
    """Level h, probability threshold alpha, margin eta, and beta schedule."""

    threshold: float
    alpha: float
    beta: BetaSchedule
    eta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.eta < 0.0:
            raise ValueError("eta must be nonnegative")


def eta_for_accuracy(
    xi: float, delta: float, grid_size: int, sigma0_min: float
) -> float:
    """Margin eta guaranteeing misclassification loss at most xi.

    ``sigma0_min`` is the smallest prior standard deviation over the grid.
    Retained for the guaranteed-termination mode; the default experiment
    configurations run with eta = 0 instead.
    """
    if xi <= 0.0 or not 0.0 < delta < 1.0 or sigma0_min <= 0.0:
        raise ValueError("xi, delta, sigma0_min must be positive (delta < 1)")
    return min(
        xi * sigma0_min / 2.0,
        xi**2 * delta * sigma0_min / (8.0 * grid_size),
    )


@dataclass(frozen=True)
class ClassificationState:
    """Partition of design points with the bounds that produced it.

    ``above``/``below``/``undecided`` are sorted design-index arrays,
    pairwise disjoint and exhaustive.
    """

    lower_f: np.ndarray
    upper_f: np.ndarray
    alpha: float
    above: np.ndarray = field(init=False)
    below: np.ndarray = field(init=False)
    undecided: np.ndarray = field(init=False)

    def __post_init__(self):
        lower = np.asarray(self.lower_f, dtype=float)
        upper = np.asarray(self.upper_f, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("bounds must be 1-D arrays of equal length")
        if (lower > upper + 1e-12).any():
            raise ValueError("lower bound exceeds upper bound")
        above = np.flatnonzero(lower > self.alpha)
        below = np.flatnonzero((upper <= self.alpha) & ~(lower > self.alpha))
        mask = np.ones(lower.shape[0], dtype=bool)
        mask[above] = False
        mask[below] = False
        for name, arr in (
            ("lower_f", lower),
            ("upper_f", upper),
            ("above", above),
            ("below", below),
            ("undecided", np.flatnonzero(mask)),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def done(self) -> bool:
        return self.undecided.size == 0


# ---------------------------------------------------------------------
# Interval and band construction
# ---------------------------------------------------------------------

def f_interval(
    gp: GpPosterior, point: int, beta_sqrt: float
) -> tuple[float, float]:
    """Credible interval for f at one joint grid point."""
    if beta_sqrt < 0.0:
        raise ValueError("beta_sqrt must be nonnegative")
    half = beta_sqrt * math.sqrt(gp.variance[point])
    mu = gp.mean[point]
    return float(mu - half), float(mu + half)


def f_intervals(gp: GpPosterior, beta_sqrt: float) -> tuple[np.ndarray, np.ndarray]:
    """Credible intervals at every grid point, as two arrays."""
    half = beta_sqrt * np.sqrt(gp.variance)
    return gp.mean - half, gp.mean + half


def indicator_band(l: float, u: float, params: AccuracyParams) -> IndicatorBand:
    """Band for 1[f > h] from an interval [l, u] with margin eta."""
    h, eta = params.threshold, params.eta
    if l > h - eta:
        return IndicatorBand.UNIT
    if u > h:
        return IndicatorBand.UNKNOWN
    return IndicatorBand.ZERO


def band_masks(
    lower: np.ndarray, upper: np.ndarray, params: AccuracyParams
) -> tuple[np.ndarray, np.ndarray]:
    """(unit, unknown) boolean masks of :func:`indicator_band` over arrays."""
    unit = lower > params.threshold - params.eta
    unknown = ~unit & (upper > params.threshold)
    return unit, unknown


def drptr_bounds(
    bands, aset: AmbiguitySet
) -> tuple[float, float]:
    """Worst-case bounds on the robust exceedance probability of one x.

    ``bands`` holds one :class:`IndicatorBand` per environment point. The
    lower bound uses cost 1 only where the band is UNIT; the upper bound
    also where it is UNKNOWN.
    """
    bands = list(bands)
    if len(bands) != len(aset.reference):
        raise ValueError("need exactly one band per environment point")
    unit = np.array([b is IndicatorBand.UNIT for b in bands])
    unknown = np.array([b is IndicatorBand.UNKNOWN for b in bands])
    lower = binary_masses(aset, unit[None, :])[0]
    upper = binary_masses(aset, (unit | unknown)[None, :])[0]
    return float(lower), float(upper)


def classify(lower_f, upper_f, alpha: float) -> ClassificationState:
    """Partition design points by their robustness bounds against alpha."""
    return ClassificationState(
        lower_f=np.asarray(lower_f, dtype=float),
        upper_f=np.asarray(upper_f, dtype=float),
        alpha=alpha,
    )


def classify_grid(
    gp: GpPosterior, params: AccuracyParams, aset: AmbiguitySet
) -> ClassificationState:
    """Full pipeline: intervals -> bands -> bounds -> classification."""
    beta_sqrt = params.beta.beta_sqrt(gp.n_obs, gp.domain.size)
    lower, upper = f_intervals(gp, beta_sqrt)
    unit, unknown = band_masks(lower, upper, params)
    n_env = gp.domain.n_env
    unit = unit.reshape(-1, n_env)
    unknown = unknown.reshape(-1, n_env)
    lower_f = binary_masses(aset, unit)
    upper_f = binary_masses(aset, unit | unknown)
    return classify(lower_f, upper_f, params.alpha)
