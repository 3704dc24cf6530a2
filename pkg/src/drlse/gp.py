"""Gaussian-process surrogate over the finite grid.

Exact posterior inference with a Gaussian kernel

    k((x, w), (x', w')) = sigma_f^2 * exp(-(|x - x'|^2 + |w - w'|^2) / L)

and noisy observations y = f(x, w) + eps, eps ~ N(0, sigma^2).  Posterior
mean and variance follow the standard conditioning formulas; the Cholesky
factor of (K + sigma^2 I) is kept so that posterior covariances between
arbitrary grid points, and the one-step-lookahead quantities derived from
them, can be queried without refitting:

    mean after adding (c, y*):  mu(a) + k(a, c) / (var(c) + sigma^2) * (y* - mu(c))
    var  after adding c:        var(a) - k(a, c)^2 / (var(c) + sigma^2)

A fitted posterior is immutable; ``with_observation`` returns a new one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from .grid import GridDomain

# Posterior variance is clamped to zero down to this tolerance, scaled by
# the prior amplitude; anything more negative indicates a genuinely failed
# factorization rather than round-off.
_VAR_CLAMP_TOL = 1e-9


class GpFitError(RuntimeError):
    """Raised when the observation Gram matrix cannot be factorized."""


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian kernel hyperparameters (all strictly positive).

    ``length_scale`` divides the squared distance inside the exponential,
    so it carries squared input units.
    """

    signal_variance: float
    length_scale: float
    noise_variance: float

    def __post_init__(self):
        for name in ("signal_variance", "length_scale", "noise_variance"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")

    def cross(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Kernel matrix between two point sets, shapes (n, d) and (m, d)."""
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        sq = (
            np.sum(a * a, axis=1)[:, None]
            + np.sum(b * b, axis=1)[None, :]
            - 2.0 * a @ b.T
        )
        np.maximum(sq, 0.0, out=sq)
        return self.signal_variance * np.exp(-sq / self.length_scale)

    def gram(self, points: np.ndarray) -> np.ndarray:
        return self.cross(points, points)


@dataclass(frozen=True)
class ObservationLog:
    """Ordered record of (joint index, observed value) pairs."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        val = np.asarray(self.values, dtype=float)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-D and equal length")
        idx.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    def __len__(self) -> int:
        return self.indices.shape[0]

    @classmethod
    def empty(cls) -> "ObservationLog":
        return cls(np.empty(0, dtype=int), np.empty(0))

    def appended(self, index: int, value: float) -> "ObservationLog":
        return ObservationLog(
            np.append(self.indices, index), np.append(self.values, value)
        )


@dataclass(frozen=True)
class LookaheadLine:
    """Affine dependence of a lookahead lower confidence bound on y*.

    ``value(y_star) = intercept + slope * y_star`` reproduces the lower
    bound of the target point after hypothetically observing y* at the
    candidate point.
    """

    intercept: float
    slope: float

    def value(self, y_star) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(y_star, dtype=float)

    def breakpoint(self, threshold: float) -> float:
        """The y* at which the line crosses ``threshold``.

        Zero-slope lines never cross; they report +inf and their constant
        indicator must be read from ``value``.
        """
        if self.slope == 0.0:
            return math.inf
        return (threshold - self.intercept) / self.slope

    @property
    def orientation(self) -> str:
        """Side of the breakpoint on which the indicator equals one."""
        if self.slope > 0.0:
            return "above"
        if self.slope < 0.0:
            return "below"
        return "constant"


class GpPosterior:
    """Posterior state of the surrogate over every grid point.

    Instances are immutable once constructed: acquisition-time queries are
    read-only and safe to run concurrently; adding data goes through
    ``with_observation`` which returns a fresh posterior.
    """

    def __init__(
        self,
        domain: GridDomain,
        kernel: KernelSpec,
        log: ObservationLog,
        prior_gram: np.ndarray | None = None,
    ):
        self.domain = domain
        self.kernel = kernel
        self.log = log

        n = domain.size
        if len(log) and (log.indices.min() < 0 or log.indices.max() >= n):
            raise ValueError("observation log refers to indices outside the grid")

        if prior_gram is None:
            prior_gram = kernel.gram(domain.joint_points)
        self._prior = prior_gram

        t = len(log)
        k_obs_grid = prior_gram[log.indices, :]  # (t, n)
        gram = k_obs_grid[:, log.indices] + kernel.noise_variance * np.eye(t)
        try:
            chol = cholesky(gram, lower=True)
        except np.linalg.LinAlgError as exc:
            cond = np.linalg.cond(gram) if t else float("nan")
            raise GpFitError(
                f"Cholesky factorization of the {t}x{t} observation Gram "
                f"matrix failed (condition number ~{cond:.3e}); the kernel "
                "is too ill-conditioned for these observations"
            ) from exc
        self._chol = chol
        self._v = solve_triangular(chol, k_obs_grid, lower=True)  # (t, n)
        alpha = cho_solve((chol, True), log.values) if t else np.empty(0)

        self.mean = k_obs_grid.T @ alpha if t else np.zeros(n)
        raw_var = prior_gram.diagonal() - np.einsum("ij,ij->j", self._v, self._v)
        clamp = _VAR_CLAMP_TOL * max(1.0, kernel.signal_variance)
        if raw_var.min() < -clamp:
            raise GpFitError(
                f"posterior variance fell to {raw_var.min():.3e}, beyond the "
                f"round-off clamp {-clamp:.3e}; observation Gram condition "
                f"number ~{np.linalg.cond(gram):.3e}"
            )
        self.variance = np.maximum(raw_var, 0.0)
        for arr in (self.mean, self.variance):
            arr.setflags(write=False)

    @property
    def n_obs(self) -> int:
        return len(self.log)

    def cov(self, a: int, b: int) -> float:
        """Posterior covariance between two joint grid indices."""
        return float(self._prior[a, b] - self._v[:, a] @ self._v[:, b])

    def cov_rows(self, rows: np.ndarray) -> np.ndarray:
        """Posterior covariance of each row index against every grid point.

        Returns shape (len(rows), grid size).  This is the bulk query the
        acquisition engine runs once per iteration.
        """
        rows = np.asarray(rows, dtype=int)
        return self._prior[rows, :] - self._v[:, rows].T @ self._v

    def lookahead_variance(self, target: int, candidate: int) -> float:
        """Posterior variance at ``target`` after observing ``candidate``.

        Independent of the hypothetical observed value; clamped at zero.
        """
        denom = self.variance[candidate] + self.kernel.noise_variance
        out = self.variance[target] - self.cov(target, candidate) ** 2 / denom
        return max(out, 0.0)

    def lookahead_line(
        self, target: int, candidate: int, beta_sqrt: float
    ) -> LookaheadLine:
        """Lower confidence bound at ``target`` as an affine function of y*.

        The bound is mean + slope * (y* - mean(candidate)) - beta_sqrt *
        lookahead standard deviation, with slope = cov / (var + noise).
        """
        if beta_sqrt < 0.0:
            raise ValueError("beta_sqrt must be nonnegative")
        denom = self.variance[candidate] + self.kernel.noise_variance
        slope = self.cov(target, candidate) / denom
        look_sd = math.sqrt(self.lookahead_variance(target, candidate))
        intercept = (
            self.mean[target] - slope * self.mean[candidate] - beta_sqrt * look_sd
        )
        return LookaheadLine(intercept=float(intercept), slope=float(slope))

    def with_observation(self, index: int, value: float) -> "GpPosterior":
        """Refit with one more observation appended (prior Gram reused)."""
        return GpPosterior(
            self.domain,
            self.kernel,
            self.log.appended(index, value),
            prior_gram=self._prior,
        )


def fit(
    domain: GridDomain,
    kernel: KernelSpec,
    log: ObservationLog,
    prior_gram: np.ndarray | None = None,
) -> GpPosterior:
    """Fit the surrogate posterior from scratch.

    ``prior_gram`` may pass a precomputed kernel matrix of the joint grid
    to avoid rebuilding it when refitting inside a loop.
    """
    return GpPosterior(domain, kernel, log, prior_gram=prior_gram)
