"""Acquisition scoring and next-point selection.

The proposed scores rank a candidate (x*, w*) by the expected number of
currently undecided design points whose robust lower bound would clear
alpha after hypothetically observing y* there.  Because each lookahead
lower confidence bound is affine in y*, the indicator cost vector of a
design point is piecewise constant in y*: it changes only at the
breakpoints where one of its environment lines crosses the level h.
Partitioning the real line at the sorted breakpoints therefore turns the
expectation into a finite sum of region probabilities times 0/1 inner
optimizations, which this module evaluates on four computation paths:

* ``naive``        -- Monte-Carlo average over M posterior draws of y*,
* ``exact``        -- the breakpoint-partition sum over every region,
* ``exact-pruned`` -- skip a region's inner optimization whenever the
                      reference-weighted cost mass is already <= alpha
                      (the optimum can only be smaller, so the indicator
                      is provably zero),
* ``approx``       -- additionally drop regions whose probability falls
                      below a per-region cutoff; the dropped mass bounds
                      the error by cutoff * (n_env + 1) and the result
                      never exceeds the exact value.

Per-pair reference functions (``exact_expectation`` and friends) mirror
the construction one candidate at a time; ``improvement_scores`` is the
vectorized engine that scores the whole grid at once and is what the
selection loop and the timing harness run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import ndtr, ndtri

from .ambiguity import (
    AmbiguitySet,
    ReferenceDistribution,
    binary_masses_float,
    worst_case_mass,
)
from .bands import AccuracyParams, ClassificationState, f_intervals
from .gp import GpPosterior, LookaheadLine
from .grid import GridDomain

# Widening (in y* standard deviations) applied to the probability window
# of the approx path; every region outside the widened window has mass
# strictly below the cutoff.
_WINDOW_MARGIN = 0.1

# Cap on the element count of the exact path's region/cost tensor per
# candidate chunk, to bound peak memory.
_CHUNK_ELEMENTS = 8_000_000


class AcquisitionKind(Enum):
    RANDOM = "random"
    US = "us"
    STRADDLE_F = "straddle-f"
    STRADDLE_US = "straddle-us"
    STRADDLE_RANDOM = "straddle-random"
    MILE = "mile"
    PROPOSED1 = "proposed1"
    PROPOSED2 = "proposed2"


class ComputationPath(Enum):
    NAIVE = "naive"
    EXACT = "exact"
    EXACT_PRUNED = "exact-pruned"
    APPROX = "approx"


@dataclass(frozen=True)
class AcquisitionConfig:
    """Strategy choice plus the knobs shared by the scoring paths."""

    kind: AcquisitionKind = AcquisitionKind.PROPOSED2
    gamma: float = 0.01
    gamma_tilde: float = 0.01
    zeta_per_region: float = 0.005
    path: ComputationPath = ComputationPath.APPROX
    naive_m: int = 1000

    def __post_init__(self):
        if self.gamma <= 0.0 or self.gamma_tilde <= 0.0:
            raise ValueError("gamma and gamma_tilde must be positive")
        if not 0.0 <= self.zeta_per_region < 1.0:
            raise ValueError("zeta_per_region must lie in [0, 1)")
        if self.naive_m < 1:
            raise ValueError("naive_m must be at least 1")


# ---------------------------------------------------------------------
# Per-pair construction: lines, regions, expectations
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class RegionPartition:
    """Sorted finite breakpoints and one representative per region.

    Regions are the half-open intervals (r[s-1], r[s]] between
    consecutive sorted breakpoints, extended by -inf and +inf at the
    ends; representatives are interior points (midpoints for bounded
    regions, endpoint -/+ 1 for the unbounded ones).
    """

    breakpoints: np.ndarray
    representatives: np.ndarray

    def probabilities(self, mu: float, sd: float) -> np.ndarray:
        """Mass of each region under y* ~ Normal(mu, sd^2)."""
        if sd <= 0.0:
            raise ValueError("predictive standard deviation must be positive")
        cdf = ndtr((self.breakpoints - mu) / sd)
        return np.diff(np.concatenate([[0.0], cdf, [1.0]]))


def lookahead_lines(
    gp: GpPosterior, x_index: int, candidate: int, beta_sqrt: float
) -> list[LookaheadLine]:
    """One lookahead lower-bound line per environment point of x_index."""
    rows = gp.domain.design_rows(x_index)
    return [gp.lookahead_line(int(r), candidate, beta_sqrt) for r in rows]


def region_partition(lines, threshold: float) -> RegionPartition:
    """Partition of the y* axis induced by the lines' h-crossings.

    Zero-slope lines never cross and contribute no breakpoint; their
    constant indicator is picked up when cost vectors are evaluated at
    the representatives.
    """
    bps = sorted(
        bp
        for ln in lines
        if ln.slope != 0.0 and math.isfinite(bp := ln.breakpoint(threshold))
    )
    if not bps:
        return RegionPartition(np.empty(0), np.array([0.0]))
    reps = [bps[0] - 1.0]
    for left, right in zip(bps[:-1], bps[1:]):
        reps.append(0.5 * (left + right))
    reps.append(bps[-1] + 1.0)
    return RegionPartition(np.asarray(bps), np.asarray(reps))


def region_costs(lines, representative: float, threshold: float) -> np.ndarray:
    """Binary cost vector of one region: 1 where a line clears h there."""
    return np.array(
        [1.0 if ln.value(representative) > threshold else 0.0 for ln in lines]
    )


def prune_region(costs, reference: ReferenceDistribution, alpha: float) -> bool:
    """True when the region provably contributes zero.

    The reference pmf is itself feasible, so the worst case is at most
    the reference-weighted cost mass; if that is already <= alpha the
    indicator cannot fire and the inner optimization is skipped.
    """
    costs = np.asarray(costs, dtype=float)
    return float(costs @ reference.probs) <= alpha


def _predictive_law(gp: GpPosterior, candidate: int) -> tuple[float, float]:
    mu = float(gp.mean[candidate])
    sd = math.sqrt(gp.variance[candidate] + gp.kernel.noise_variance)
    return mu, sd


def _pair_expectation(
    gp: GpPosterior,
    x_index: int,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
    pruned: bool,
    cutoff: float,
) -> float:
    beta_sqrt = params.beta.beta_sqrt(gp.n_obs, gp.domain.size)
    lines = lookahead_lines(gp, x_index, candidate, beta_sqrt)
    partition = region_partition(lines, params.threshold)
    mu, sd = _predictive_law(gp, candidate)
    probs = partition.probabilities(mu, sd)
    total = 0.0
    for prob, rep in zip(probs, partition.representatives):
        if prob < cutoff or prob == 0.0:
            continue
        costs = region_costs(lines, rep, params.threshold)
        if pruned and prune_region(costs, aset.reference, params.alpha):
            continue
        if worst_case_mass(aset, costs) > params.alpha:
            total += prob
    return total


def exact_expectation(
    gp: GpPosterior,
    x_index: int,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
) -> float:
    """P over y* that the lookahead robust lower bound of x clears alpha.

    Computed exactly (up to Gaussian-CDF precision) via the breakpoint
    partition; the inner bands use a zero margin regardless of the
    classification eta.
    """
    return _pair_expectation(gp, x_index, candidate, aset, params, False, 0.0)


def exact_expectation_pruned(
    gp: GpPosterior,
    x_index: int,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
) -> float:
    """As :func:`exact_expectation`, skipping provably-zero regions."""
    return _pair_expectation(gp, x_index, candidate, aset, params, True, 0.0)


def approx_expectation(
    gp: GpPosterior,
    x_index: int,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
    zeta_per_region: float,
) -> float:
    """Drop regions below the probability cutoff; never exceeds exact.

    The absolute error is at most zeta_per_region * (n_env + 1).
    """
    if not 0.0 <= zeta_per_region < 1.0:
        raise ValueError("zeta_per_region must lie in [0, 1)")
    return _pair_expectation(
        gp, x_index, candidate, aset, params, True, zeta_per_region
    )


def a_t(
    gp: GpPosterior,
    state: ClassificationState,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
    config: AcquisitionConfig,
    rng: np.random.Generator | None = None,
) -> float:
    """Expected count of undecided design points flipped above alpha.

    Sums the per-x expectation over the undecided set on the configured
    computation path; nonnegative and at most the undecided count.
    """
    if config.path is ComputationPath.NAIVE:
        if rng is None:
            raise ValueError("the naive path needs an rng")
        mu, sd = _predictive_law(gp, candidate)
        draws = mu + sd * rng.standard_normal(config.naive_m)
        beta_sqrt = params.beta.beta_sqrt(gp.n_obs, gp.domain.size)
        total = 0.0
        for x in state.undecided:
            lines = lookahead_lines(gp, int(x), candidate, beta_sqrt)
            hits = 0
            for y in draws:
                costs = [
                    1.0 if ln.value(y) > params.threshold else 0.0 for ln in lines
                ]
                if worst_case_mass(aset, np.array(costs)) > params.alpha:
                    hits += 1
            total += hits / config.naive_m
        return total
    if config.path is ComputationPath.EXACT:
        pair = exact_expectation
        extra = ()
    elif config.path is ComputationPath.EXACT_PRUNED:
        pair = exact_expectation_pruned
        extra = ()
    else:
        pair = approx_expectation
        extra = (config.zeta_per_region,)
    return float(
        sum(pair(gp, int(x), candidate, aset, params, *extra) for x in state.undecided)
    )


# ---------------------------------------------------------------------
# Vectorized engine over all candidates
# ---------------------------------------------------------------------

def _lookahead_tensors(gp: GpPosterior, rows: np.ndarray, beta_sqrt: float, cov=None):
    """Slopes and constants of every lookahead line, rows x candidates.

    Returns (slope, const) of shape (len(rows), grid size) with
    line(y*) = const + slope * y*; the lookahead standard deviation is
    already folded into the constant.
    """
    if cov is None:
        cov = gp.cov_rows(rows)
    denom = gp.variance + gp.kernel.noise_variance
    slope = cov / denom[None, :]
    # The caller may reuse cov, so build the lookahead sd in one fresh
    # buffer and run the remaining steps in place.
    look = cov * slope
    np.subtract(gp.variance[rows][:, None], look, out=look)
    np.maximum(look, 0.0, out=look)
    np.sqrt(look, out=look)
    look *= -beta_sqrt
    look += gp.mean[rows][:, None]
    const = look
    const -= slope * gp.mean[None, :]
    return slope, const


def improvement_scores(
    gp: GpPosterior,
    state: ClassificationState,
    aset: AmbiguitySet,
    params: AccuracyParams,
    config: AcquisitionConfig,
    rng: np.random.Generator | None = None,
    cov_rows: np.ndarray | None = None,
) -> np.ndarray:
    """The classification-gain score of every candidate, as one array.

    Equivalent to calling :func:`a_t` per candidate, evaluated with the
    whole grid batched.  ``cov_rows`` may pass the posterior covariance
    of the undecided rows against the grid (a path-independent posterior
    query) to avoid recomputing it per call.
    """
    n = gp.domain.size
    undecided = state.undecided
    if undecided.size == 0:
        return np.zeros(n)
    n_env = gp.domain.n_env
    rows = (undecided[:, None] * n_env + np.arange(n_env)).ravel()
    beta_sqrt = params.beta.beta_sqrt(gp.n_obs, n)
    slope, const = _lookahead_tensors(gp, rows, beta_sqrt, cov=cov_rows)

    n_u = undecided.size
    # (n_u, n_candidates, n_env) layouts, contiguous along the env axis.
    shape = (n_u, n_env, n)
    s3 = np.ascontiguousarray(slope.reshape(shape).transpose(0, 2, 1))
    a3 = np.ascontiguousarray(const.reshape(shape).transpose(0, 2, 1))

    mu_y = gp.mean
    sd_y = np.sqrt(gp.variance + gp.kernel.noise_variance)

    if config.path is ComputationPath.NAIVE:
        if rng is None:
            raise ValueError("the naive path needs an rng")
        draws = mu_y[:, None] + sd_y[:, None] * rng.standard_normal(
            (n, config.naive_m)
        )
        return _point_set_scores(
            s3, a3, draws[None, :, :], None, aset, params, pruned=True
        )

    bp3 = np.subtract(params.threshold, a3)
    with np.errstate(divide="ignore", invalid="ignore"):
        np.divide(bp3, s3, out=bp3)
    bp3[s3 == 0.0] = np.inf

    if config.path is ComputationPath.APPROX and config.zeta_per_region > 0.0:
        return _windowed_region_scores(
            s3, a3, bp3, mu_y, sd_y, aset, params, config.zeta_per_region
        )
    pruned = config.path is not ComputationPath.EXACT
    return _full_region_scores(s3, a3, bp3, mu_y, sd_y, aset, params, pruned)


def _indicators(aset, alpha, costs, pruned):
    """0/1 outcome of the inner optimization for rows of binary costs.

    With ``pruned`` the reference-mass inequality is tested first and
    the optimization runs only on the rows it cannot rule out; the
    result is identical either way.
    """
    flat = costs.reshape(-1, costs.shape[-1]).astype(float)
    if pruned:
        mass_ref = flat @ aset.reference.probs
        keep = mass_ref > alpha
        ind = np.zeros(flat.shape[0])
        if keep.any():
            ind[keep] = (
                binary_masses_float(aset, flat[keep], reference_mass=mass_ref[keep])
                > alpha
            )
    else:
        ind = (binary_masses_float(aset, flat) > alpha).astype(float)
    return ind.reshape(costs.shape[:-1])


def _point_set_scores(s3, a3, points, weights, aset, params, pruned):
    """Accumulate sum_u sum_p weight * 1[inner optimum > alpha].

    ``points`` holds the y* values to evaluate per (undecided, candidate)
    pair, broadcastable to (n_u, n_candidates, n_points); the exact path
    passes region representatives weighted by region probabilities, the
    Monte-Carlo path passes shared posterior draws with uniform weight.
    The two paths share this code so their measured cost per evaluated
    point is identical.
    """
    n_u, n, n_env = s3.shape
    n_pts = points.shape[-1]
    h, alpha = params.threshold, params.alpha
    scores = np.zeros(n)
    chunk = max(1, _CHUNK_ELEMENTS // (n_u * n_pts * n_env))
    for c0 in range(0, n, chunk):
        sl = slice(c0, min(c0 + chunk, n))
        val = (
            a3[:, sl, None, :]
            + s3[:, sl, None, :] * points[:, sl, :, None]
        )  # (n_u, chunk, n_pts, n_env)
        ind = _indicators(aset, alpha, val > h, pruned)
        if weights is None:
            scores[sl] = ind.mean(axis=2).sum(axis=0)
        else:
            scores[sl] = np.einsum("ucs,ucs->c", weights[:, sl], ind)
    return scores


def _full_region_scores(s3, a3, bp3, mu_y, sd_y, aset, params, pruned):
    n_u, n, n_env = s3.shape
    srt = np.sort(bp3, axis=2)
    with np.errstate(invalid="ignore"):
        cdf = ndtr((srt - mu_y[None, :, None]) / sd_y[None, :, None])
    probs = np.empty((n_u, n, n_env + 1))
    probs[:, :, 0] = cdf[:, :, 0]
    probs[:, :, 1:n_env] = np.diff(cdf, axis=2)
    probs[:, :, n_env] = 1.0 - cdf[:, :, -1]

    lo = np.concatenate([np.full((n_u, n, 1), -np.inf), srt], axis=2)
    hi = np.concatenate([srt, np.full((n_u, n, 1), np.inf)], axis=2)
    with np.errstate(invalid="ignore"):
        rep = np.where(
            np.isfinite(lo) & np.isfinite(hi),
            0.5 * (lo + hi),
            np.where(
                np.isfinite(hi),
                hi - 1.0,
                np.where(np.isfinite(lo), lo + 1.0, 0.0),
            ),
        )
    return _point_set_scores(s3, a3, rep, probs, aset, params, pruned)


def _windowed_region_scores(s3, a3, bp3, mu_y, sd_y, aset, params, cutoff):
    """Approx path: resolve only regions intersecting the central window.

    A region whose probability reaches the cutoff must intersect
    [mu - z sd, mu + z sd] with ndtr(-z) = cutoff; breakpoints outside
    the (slightly widened) window matter only through the nearest one on
    each side, which caps the outermost candidate regions.  The edges
    assembled here are true region boundaries, so the surviving
    probabilities match the full computation exactly.
    """
    n_u, n, n_env = s3.shape
    h, alpha = params.threshold, params.alpha
    z_w = float(-ndtri(min(cutoff, 0.5))) + _WINDOW_MARGIN
    lo_w = mu_y - z_w * sd_y
    hi_w = mu_y + z_w * sd_y

    below = bp3 < lo_w[None, :, None]
    above = bp3 > hi_w[None, :, None]
    left_edge = np.max(bp3, axis=2, where=below, initial=-np.inf)  # (n_u, n)
    right_edge = np.min(bp3, axis=2, where=above, initial=np.inf)
    inside = ~(below | above)

    counts = inside.sum(axis=2).ravel()  # breakpoints inside, per (u, c)
    n_groups = n_u * n
    offsets = np.concatenate([[0], np.cumsum(counts + 1)])
    total = int(offsets[-1])

    pos = np.flatnonzero(inside.ravel())
    vals = bp3.ravel()[pos]
    gid = pos // n_env
    order = np.lexsort((vals, gid))
    vals = vals[order]
    gid = gid[order]
    # Rank of each inside breakpoint within its group.
    first = np.concatenate([[0], np.cumsum(counts)])[:-1]
    rank = np.arange(vals.size) - first[gid]

    lefts = np.empty(total)
    rights = np.empty(total)
    lefts[offsets[:-1]] = left_edge.ravel()
    rights[offsets[:-1] + counts] = right_edge.ravel()
    slot = offsets[:-1][gid] + rank
    rights[slot] = vals
    lefts[slot + 1] = vals

    group_of_region = np.repeat(np.arange(n_groups), counts + 1)
    mu_g = mu_y[group_of_region % n]
    sd_g = sd_y[group_of_region % n]
    probs = ndtr((rights - mu_g) / sd_g) - ndtr((lefts - mu_g) / sd_g)

    keep = probs >= cutoff
    if not keep.any():
        return np.zeros(n)
    k_lo = lefts[keep]
    k_hi = rights[keep]
    k_probs = probs[keep]
    k_group = group_of_region[keep]
    with np.errstate(invalid="ignore"):
        rep = np.where(
            np.isfinite(k_lo) & np.isfinite(k_hi),
            0.5 * (k_lo + k_hi),
            np.where(
                np.isfinite(k_hi),
                k_hi - 1.0,
                np.where(np.isfinite(k_lo), k_lo + 1.0, mu_y[k_group % n]),
            ),
        )

    flat_s = s3.reshape(n_groups, n_env)
    flat_a = a3.reshape(n_groups, n_env)
    val = flat_s.take(k_group, axis=0)
    val *= rep[:, None]
    val += flat_a.take(k_group, axis=0)
    ind = _indicators(aset, alpha, val > h, True)
    return np.bincount(k_group % n, weights=k_probs * ind, minlength=n)


# ---------------------------------------------------------------------
# MILE / RMILE
# ---------------------------------------------------------------------

def mile_scores(
    gp: GpPosterior,
    state: ClassificationState,
    params: AccuracyParams,
    eta: float | None = None,
    cov_rows: np.ndarray | None = None,
) -> np.ndarray:
    """Expected gain in confidently-above points, for every candidate.

    For each undecided-x/environment pair the single-indicator
    expectation P(lookahead lower bound > h) has the closed form
    Phi(sqrt(var_c + noise) / |cov| * (mean - b * lookahead sd - h));
    zero-covariance pairs have a constant lookahead line and contribute
    its indicator directly.  The already-confident pairs (current lower
    bound above h - eta) are subtracted.
    """
    n = gp.domain.size
    if eta is None:
        eta = params.eta
    undecided = state.undecided
    if undecided.size == 0:
        return np.zeros(n)
    n_env = gp.domain.n_env
    rows = (undecided[:, None] * n_env + np.arange(n_env)).ravel()
    beta_sqrt = params.beta.beta_sqrt(gp.n_obs, n)

    cov = gp.cov_rows(rows) if cov_rows is None else cov_rows
    denom = gp.variance + gp.kernel.noise_variance
    look_var = gp.variance[rows][:, None] - cov * cov / denom[None, :]
    np.maximum(look_var, 0.0, out=look_var)
    look_sd = np.sqrt(look_var, out=look_var)

    margin = gp.mean[rows][:, None] - beta_sqrt * look_sd - params.threshold
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.sqrt(denom)[None, :] * margin / np.abs(cov)
    phi = ndtr(arg)
    lower_rows = gp.mean[rows] - beta_sqrt * np.sqrt(gp.variance[rows])
    const_ind = (lower_rows > params.threshold).astype(float)
    phi = np.where(cov == 0.0, const_ind[:, None], phi)

    already = float(np.sum(lower_rows > params.threshold - eta))
    return phi.sum(axis=0) - already


def rmile_scores(
    gp: GpPosterior,
    state: ClassificationState,
    params: AccuracyParams,
    gamma_tilde: float,
    eta: float | None = None,
    cov_rows: np.ndarray | None = None,
) -> np.ndarray:
    """MILE with an exploration floor: max(MILE, gamma_tilde * sd)."""
    mile = mile_scores(gp, state, params, eta=eta, cov_rows=cov_rows)
    return np.maximum(mile, gamma_tilde * np.sqrt(gp.variance))


def mile_score(
    gp: GpPosterior,
    state: ClassificationState,
    candidate: int,
    params: AccuracyParams,
    eta: float | None = None,
) -> float:
    """Single-candidate MILE score (reference path for tests)."""
    return float(mile_scores(gp, state, params, eta=eta)[candidate])


def rmile_score(
    gp: GpPosterior,
    state: ClassificationState,
    candidate: int,
    params: AccuracyParams,
    gamma_tilde: float,
    eta: float | None = None,
) -> float:
    return float(
        rmile_scores(gp, state, params, gamma_tilde, eta=eta)[candidate]
    )


# ---------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------

def selection_scores(
    gp: GpPosterior,
    state: ClassificationState,
    aset: AmbiguitySet,
    params: AccuracyParams,
    config: AcquisitionConfig,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Scores whose argmax is the next evaluation point.

    Only defined for the grid-argmax strategies; the straddle-on-x and
    random strategies pick their point inside :func:`select_next`.
    """
    kind = config.kind
    if kind is AcquisitionKind.US:
        return gp.variance.copy()
    if kind is AcquisitionKind.STRADDLE_F:
        beta_sqrt = params.beta.beta_sqrt(gp.n_obs, gp.domain.size)
        lower, upper = f_intervals(gp, beta_sqrt)
        return np.minimum(upper - params.threshold, params.threshold - lower)
    if kind is AcquisitionKind.MILE:
        return rmile_scores(gp, state, params, config.gamma_tilde, eta=0.0)
    rows = None
    if state.undecided.size:
        n_env = gp.domain.n_env
        idx = (state.undecided[:, None] * n_env + np.arange(n_env)).ravel()
        rows = gp.cov_rows(idx)
    imp = improvement_scores(gp, state, aset, params, config, rng=rng, cov_rows=rows)
    if kind is AcquisitionKind.PROPOSED1:
        return np.maximum(imp, config.gamma * np.sqrt(gp.variance))
    if kind is AcquisitionKind.PROPOSED2:
        rmile = rmile_scores(gp, state, params, config.gamma_tilde, cov_rows=rows)
        return np.maximum(imp, config.gamma * rmile)
    raise ValueError(f"{kind} has no grid-wide score")


def select_next(
    gp: GpPosterior,
    state: ClassificationState,
    domain: GridDomain,
    aset: AmbiguitySet,
    params: AccuracyParams,
    config: AcquisitionConfig,
    rng: np.random.Generator,
) -> int:
    """Pick the next joint grid index; ties break to the lowest index."""
    if domain.size == 0:
        raise ValueError("empty domain")
    kind = config.kind
    if kind is AcquisitionKind.RANDOM:
        return int(rng.integers(domain.size))
    if kind in (AcquisitionKind.STRADDLE_US, AcquisitionKind.STRADDLE_RANDOM):
        straddle = np.minimum(
            state.upper_f - params.alpha, params.alpha - state.lower_f
        )
        x = int(np.argmax(straddle))
        if kind is AcquisitionKind.STRADDLE_RANDOM:
            w = int(rng.integers(domain.n_env))
        else:
            w = int(np.argmax(gp.variance[domain.design_rows(x)]))
        return domain.joint_index(x, w)
    scores = selection_scores(gp, state, aset, params, config, rng=rng)
    return int(np.argmax(scores))
