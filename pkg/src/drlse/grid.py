"""Finite design/environment grids and joint indexing.

The surrogate model and every acquisition routine operate on the finite
product grid of design points and environment points.  A joint index
``j = ix * n_env + iw`` enumerates the product row-major (design-major),
and all per-grid-point arrays in this package follow that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _as_point_matrix(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("point list must be a nonempty 1-D or 2-D array")
    return arr


@dataclass(frozen=True)
class GridDomain:
    """Product grid of design points and environment points.

    ``design_points`` has shape (n_design, d_x) and ``env_points`` shape
    (n_env, d_w); 1-D inputs are promoted to single-column matrices.
    Both lists must be nonempty and free of duplicate rows.
    """

    design_points: np.ndarray
    env_points: np.ndarray
    joint_points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        design = _as_point_matrix(self.design_points)
        env = _as_point_matrix(self.env_points)
        for name, pts in (("design_points", design), ("env_points", env)):
            if np.unique(pts, axis=0).shape[0] != pts.shape[0]:
                raise ValueError(f"{name} contains duplicate points")
        joint = np.concatenate(
            [
                np.repeat(design, env.shape[0], axis=0),
                np.tile(env, (design.shape[0], 1)),
            ],
            axis=1,
        )
        for arr in (design, env, joint):
            arr.setflags(write=False)
        object.__setattr__(self, "design_points", design)
        object.__setattr__(self, "env_points", env)
        object.__setattr__(self, "joint_points", joint)

    @property
    def n_design(self) -> int:
        return self.design_points.shape[0]

    @property
    def n_env(self) -> int:
        return self.env_points.shape[0]

    @property
    def size(self) -> int:
        return self.n_design * self.n_env

    def joint_index(self, ix: int, iw: int) -> int:
        if not (0 <= ix < self.n_design and 0 <= iw < self.n_env):
            raise IndexError(f"grid index ({ix}, {iw}) out of range")
        return ix * self.n_env + iw

    def split_index(self, joint: int) -> tuple[int, int]:
        if not 0 <= joint < self.size:
            raise IndexError(f"joint index {joint} out of range")
        return divmod(joint, self.n_env)

    def design_rows(self, ix: int) -> np.ndarray:
        """Joint indices of all (ix, w) pairs, in environment order."""
        if not 0 <= ix < self.n_design:
            raise IndexError(f"design index {ix} out of range")
        return ix * self.n_env + np.arange(self.n_env)

    @classmethod
    def from_ranges(
        cls,
        design_range: tuple[float, float],
        env_range: tuple[float, float],
        n_design: int,
        n_env: int,
    ) -> "GridDomain":
        """Uniform 1-D grids over closed intervals, endpoints included."""
        lo1, hi1 = design_range
        lo2, hi2 = env_range
        if not (lo1 < hi1 and lo2 < hi2):
            raise ValueError("ranges must satisfy lower < upper")
        if n_design < 2 or n_env < 2:
            raise ValueError("grid counts must be at least 2")
        return cls(
            np.linspace(lo1, hi1, n_design),
            np.linspace(lo2, hi2, n_env),
        )
