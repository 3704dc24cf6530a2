"""Ambiguity sets of environment distributions and worst-case masses.

The ambiguity set is the closed ball of probability mass functions within
distance epsilon of a reference pmf under the L1 or L2 norm.  The core
query is the worst case (minimum) of sum_j c_j p_j over the ball for a
cost vector c, which is the inner problem behind every robustness bound
in this package.

The reference ball is defined with a strict inequality, but a linear
objective attains the same infimum on the closure, so all solvers here
optimize over the closed ball; that makes the optimum attained and the
returned values deterministic.

For L1 the minimum has a closed form.  Moving one unit of probability
mass between coordinates costs 2 units of L1 budget, so with binary
costs the best move is to shift min(m1, eps/2) of the mass m1 currently
on cost-1 coordinates onto a cost-0 coordinate; when every coordinate
costs 1 the simplex constraint pins the value at 1.  Real-valued costs
generalize this to a greedy transfer from the most expensive coordinates
to the cheapest one.

For L2 the problem is a small convex program solved exactly via its KKT
system: for an active ball constraint the minimizer is the Euclidean
projection of (reference - costs / (2 lam)) onto the simplex, and the
multiplier lam is found by bisection on the attained distance, which is
monotone in lam.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

L1 = "l1"
L2 = "l2"

_L2_BISECT_STEPS = 200


@dataclass(frozen=True)
class ReferenceDistribution:
    """Reference pmf over the environment grid."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("reference pmf must be a nonempty 1-D array")
        if probs.min() < 0.0:
            raise ValueError("reference pmf has negative entries")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"reference pmf sums to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __len__(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class AmbiguitySet:
    """Ball of pmfs around a reference, under the L1 or L2 norm."""

    metric: str
    radius: float
    reference: ReferenceDistribution

    def __post_init__(self):
        if self.metric not in (L1, L2):
            raise ValueError(f"unsupported metric {self.metric!r}")
        if not self.radius > 0.0:
            raise ValueError("radius must be strictly positive")


def _check_costs(aset: AmbiguitySet, costs) -> np.ndarray:
    costs = np.asarray(costs, dtype=float)
    if costs.shape != (len(aset.reference),):
        raise ValueError(
            f"cost vector has shape {costs.shape}, expected ({len(aset.reference)},)"
        )
    return costs


def worst_case_mass(aset: AmbiguitySet, costs) -> float:
    """Minimum of sum c_j p_j over the closed ball, for binary costs."""
    costs = _check_costs(aset, costs)
    binary = (costs == 0.0) | (costs == 1.0)
    if not binary.all():
        bad = costs[~binary][0]
        raise ValueError(f"cost entry {bad!r} is not binary")
    if aset.metric == L1:
        if costs.all():
            return 1.0
        m1 = float(costs @ aset.reference.probs)
        return max(0.0, m1 - aset.radius / 2.0)
    return _l2_min_mass(aset.reference.probs, costs, aset.radius)


def worst_case_mass_general(aset: AmbiguitySet, costs) -> float:
    """Same program with real-valued costs in [0, 1].

    Agrees exactly with :func:`worst_case_mass` on binary inputs.
    """
    costs = _check_costs(aset, costs)
    if costs.min() < 0.0 or costs.max() > 1.0:
        raise ValueError("cost entries must lie in [0, 1]")
    if aset.metric == L1:
        return _l1_min_mass_general(aset.reference.probs, costs, aset.radius)
    return _l2_min_mass(aset.reference.probs, costs, aset.radius)


def binary_masses(aset: AmbiguitySet, cost_rows: np.ndarray) -> np.ndarray:
    """Vectorized :func:`worst_case_mass` over rows of binary costs.

    ``cost_rows`` is boolean (or 0/1) with shape (..., n_env); one worst
    case is computed per leading index.  The L1 branch is a closed form;
    the L2 branch solves one convex program per row.
    """
    cost_rows = np.asarray(cost_rows)
    pstar = aset.reference.probs
    if cost_rows.shape[-1] != pstar.shape[0]:
        raise ValueError("cost rows have the wrong trailing dimension")
    return binary_masses_float(aset, cost_rows.astype(float))


def binary_masses_float(
    aset: AmbiguitySet, costs_f: np.ndarray, reference_mass: np.ndarray | None = None
) -> np.ndarray:
    """:func:`binary_masses` on an already-float 0/1 cost array.

    ``reference_mass`` may pass precomputed rows @ reference to save one
    matrix-vector product when the caller needed it anyway.
    """
    pstar = aset.reference.probs
    if aset.metric == L1:
        m1 = costs_f @ pstar if reference_mass is None else reference_mass
        out = np.maximum(0.0, m1 - aset.radius / 2.0)
        out[costs_f.sum(axis=-1) == pstar.shape[0]] = 1.0
        return out
    flat = costs_f.reshape(-1, pstar.shape[0])
    out = np.array([_l2_min_mass(pstar, row, aset.radius) for row in flat])
    return out.reshape(costs_f.shape[:-1])


# ---------------------------------------------------------------------
# L1: greedy transfer for general costs
# ---------------------------------------------------------------------

def _l1_min_mass_general(pstar, costs, radius) -> float:
    base = float(costs @ pstar)
    c_min = float(costs.min())
    budget = radius / 2.0
    saving = 0.0
    for j in np.argsort(costs)[::-1]:
        gain = costs[j] - c_min
        if gain <= 0.0 or budget <= 0.0:
            break
        moved = min(budget, float(pstar[j]))
        saving += moved * gain
        budget -= moved
    return max(c_min, base - saving)


# ---------------------------------------------------------------------
# L2: exact KKT solve with bisection on the ball multiplier
# ---------------------------------------------------------------------

def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    cond = u - css / ind > 0.0
    rho = ind[cond][-1]
    theta = css[cond][-1] / rho
    return np.maximum(v - theta, 0.0)


def _l2_min_mass(pstar, costs, radius) -> float:
    n = costs.shape[0]
    # Distance from pstar to the optimal face (cheapest coordinates only);
    # if the face already touches the ball the simplex optimum c_min is
    # attained exactly.
    c_min = float(costs.min())
    cheap = costs == c_min
    if cheap.all():
        return c_min
    face = np.zeros(n)
    face[cheap] = _project_simplex(pstar[cheap])
    if np.linalg.norm(face - pstar) <= radius:
        return c_min

    def solution(lam: float) -> np.ndarray:
        return _project_simplex(pstar - costs / (2.0 * lam))

    # The attained distance decreases in lam: lam -> 0 recovers the free
    # simplex optimum (outside the ball by the check above), lam -> inf
    # recovers pstar itself (distance 0 < radius).
    lo, hi = 1e-12, 1.0
    while np.linalg.norm(solution(hi) - pstar) > radius:
        hi *= 2.0
        if hi > 1e18:
            break
    for _ in range(_L2_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(solution(mid) - pstar) > radius:
            lo = mid
        else:
            hi = mid
    p = solution(hi)
    return float(costs @ p)
