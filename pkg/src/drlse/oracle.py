"""Brute-force reference computations for tests.

Each oracle reaches the quantity it checks by an arithmetic route that
shares no code with the production path it certifies: Monte-Carlo
averaging instead of the breakpoint partition, simplex lattice
enumeration and basic-feasible-solution enumeration instead of the
closed-form/KKT ball optimizers.  They are test equipment, sized for
small instances, and never run on the production path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ambiguity import L1, AmbiguitySet, binary_masses
from .bands import AccuracyParams
from .gp import GpPosterior

_MESH_POINT_CAP = 5_000_000
_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    """Sample counts and instance-size caps for the reference checks."""

    mc_samples: int = 20000
    mesh_resolution: float = 1.0 / 400.0
    max_design: int = 10
    max_env: int = 8

    def __post_init__(self):
        if self.mc_samples < 1000:
            raise ValueError("mc_samples must be at least 1000")
        if not 0.0 < self.mesh_resolution <= 1.0 / 100.0:
            raise ValueError("mesh step must be at most 1/100")


def naive_expectation(
    gp: GpPosterior,
    x_index: int,
    candidate: int,
    aset: AmbiguitySet,
    params: AccuracyParams,
    m: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Monte-Carlo estimate of the lookahead classification probability.

    Draws m hypothetical observations from Normal(mean, var + noise) at
    the candidate, evaluates every lookahead lower-bound line at each
    draw without refitting, and averages the indicator of the robust
    lower bound clearing alpha.  The reported standard error is the
    binomial one of the Agresti-Coull shrunk proportion (k+2)/(m+4),
    which stays positive and calibrated when every draw lands on the
    same side (the raw Wald error collapses to zero there).
    """
    beta_sqrt = params.beta.beta_sqrt(gp.n_obs, gp.domain.size)
    rows = gp.domain.design_rows(x_index)
    lines = [gp.lookahead_line(int(r), candidate, beta_sqrt) for r in rows]
    intercepts = np.array([ln.intercept for ln in lines])
    slopes = np.array([ln.slope for ln in lines])

    mu = gp.mean[candidate]
    sd = math.sqrt(gp.variance[candidate] + gp.kernel.noise_variance)
    draws = rng.normal(mu, sd, size=m)

    costs = (intercepts[None, :] + draws[:, None] * slopes[None, :]) > params.threshold
    masses = binary_masses(aset, costs)
    hits = int(np.sum(masses > params.alpha))
    estimate = hits / m
    p_smooth = (hits + 2.0) / (m + 4.0)
    stderr = math.sqrt(p_smooth * (1.0 - p_smooth) / m)
    return estimate, stderr


def mesh_min_mass(aset: AmbiguitySet, costs, resolution: float) -> float:
    """Minimum cost mass over a simplex lattice near the ball.

    Enumerates pmfs with entries that are multiples of ``resolution``
    and distance at most radius + n * resolution from the reference, a
    slight relaxation that keeps the lattice neighborhood of the true
    optimizer inside the search.  The returned value is therefore within
    O(n * resolution) of the true optimum on either side (the objective
    is 1-Lipschitz in total variation).
    """
    costs = np.asarray(costs, dtype=float)
    n = costs.shape[0]
    steps = round(1.0 / resolution)
    count = math.comb(steps + n - 1, n - 1)
    if count > _MESH_POINT_CAP:
        raise ValueError(f"mesh would enumerate {count} points; refine the caps")
    grid = np.array(list(_compositions(steps, n)), dtype=float) / steps
    diff = grid - aset.reference.probs[None, :]
    if aset.metric == L1:
        dist = np.abs(diff).sum(axis=1)
    else:
        dist = np.sqrt((diff * diff).sum(axis=1))
    inside = dist <= aset.radius + n * resolution
    if not inside.any():
        raise RuntimeError("mesh found no feasible lattice point")
    return float((grid[inside] @ costs).min())


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head, *rest)


# ---------------------------------------------------------------------
# Exact LP oracle for the L1 ball (basic feasible solutions)
# ---------------------------------------------------------------------
#
# With the split p = p* + u - v, u, v >= 0, the feasible region
# {p in simplex, |p - p*|_1 <= radius} is the projection of the
# polytope
#
#     p - u + v = p*,  sum p = 1,  sum(u + v) + slack = radius,
#     p, u, v, slack >= 0,
#
# whose vertices are enumerated below by solving every nonsingular
# (n+2)x(n+2) basis system.  A linear objective attains its minimum at
# one of them.

@lru_cache(maxsize=8)
def _l1_basis_systems(n: int):
    cols = 3 * n + 1
    a = np.zeros((n + 2, cols))
    a[:n, :n] = np.eye(n)
    a[:n, n : 2 * n] = -np.eye(n)
    a[:n, 2 * n : 3 * n] = np.eye(n)
    a[n, :n] = 1.0
    a[n + 1, n : 3 * n] = 1.0
    a[n + 1, 3 * n] = 1.0
    combos = np.array(list(itertools.combinations(range(cols), n + 2)))
    mats = a.T[combos].transpose(0, 2, 1)  # (n_combos, n+2, n+2)
    dets = np.linalg.det(mats)
    keep = np.abs(dets) > 1e-9
    return combos[keep], np.linalg.inv(mats[keep])


def _l1_ball_vertices_key(reference: bytes, radius: float, n: int):
    pstar = np.frombuffer(reference)
    combos, inverses = _l1_basis_systems(n)
    b = np.concatenate([pstar, [1.0, radius]])
    z = inverses @ b  # (n_bases, n+2)
    feasible = (z >= -_FEAS_TOL).all(axis=1)
    combos = combos[feasible]
    z = z[feasible]
    verts = np.zeros((z.shape[0], n))
    mask = combos < n
    rows = np.repeat(np.arange(z.shape[0]), n + 2).reshape(combos.shape)
    verts[rows[mask], combos[mask]] = z[mask]
    return verts


_l1_ball_vertices_cached = lru_cache(maxsize=64)(_l1_ball_vertices_key)


def l1_ball_vertices(aset: AmbiguitySet) -> np.ndarray:
    """Vertices (in p-space) of the L1-ball-restricted simplex."""
    if aset.metric != L1:
        raise ValueError("vertex enumeration is defined for the L1 ball only")
    n = len(aset.reference)
    return _l1_ball_vertices_cached(
        aset.reference.probs.tobytes(), aset.radius, n
    )


def vertex_lp_min(aset: AmbiguitySet, costs) -> float:
    """Exact LP minimum of sum c_j p_j over the L1 ball via vertices."""
    costs = np.asarray(costs, dtype=float)
    verts = l1_ball_vertices(aset)
    if verts.shape[0] == 0:
        raise RuntimeError("no feasible vertex found")
    return float((verts @ costs).min())
