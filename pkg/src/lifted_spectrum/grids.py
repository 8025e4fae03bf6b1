"""Quadrature grids on intervals and their tensor products."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ProblemConfig


class InvalidIntervalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Quadrature nodes and positive weights on ``[lo, hi]``."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        lo, hi = map(float, self.interval)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise InvalidIntervalError("nodes and weights must be 1D arrays of equal length")
        if not lo < hi:
            raise InvalidIntervalError(f"empty interval [{lo}, {hi}]")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidIntervalError("nodes must be strictly ascending")
        if nodes[0] < lo or nodes[-1] > hi:
            raise InvalidIntervalError("nodes must lie inside the interval")
        if np.any(weights <= 0):
            raise InvalidIntervalError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "interval", (lo, hi))

    def __len__(self):
        return len(self.nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class TensorGrid2D:
    """Product grid; flattened index ``i1 * len(axis2) + i2`` (axis2 fastest)."""

    axis1: Grid1D
    axis2: Grid1D

    def __len__(self):
        return len(self.axis1) * len(self.axis2)

    @property
    def size(self) -> int:
        return len(self)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.axis1), len(self.axis2)

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.axis1.weights, self.axis2.weights).ravel()

    def flat_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates of both axes, repeated to the flattened length."""
        n2 = len(self.axis2)
        return np.repeat(self.axis1.nodes, n2), np.tile(self.axis2.nodes, len(self.axis1))


def uniform_grid(lo: float, hi: float, n: int) -> Grid1D:
    """Midpoint rule with ``n`` equal cells on ``[lo, hi]``.

    Examples
    --------
    >>> uniform_grid(0.0, 1.0, 2).nodes
    array([0.25, 0.75])
    """
    if not lo < hi:
        raise InvalidIntervalError(f"need lo < hi, got [{lo}, {hi}]")
    if n < 2:
        raise InvalidIntervalError(f"need at least 2 nodes, got {n}")
    h = (hi - lo) / n
    nodes = lo + (np.arange(n) + 0.5) * h
    return Grid1D(nodes, np.full(n, h), (lo, hi))


def s_grid_from_r(config: ProblemConfig) -> Grid1D:
    """Midpoint grid in ``s = r_max / r`` on ``[1, r_max / r_min]``."""
    return uniform_grid(1.0, config.s_max, config.n_s)


def r_grid_from_s(s_grid: Grid1D, r_max: float) -> Grid1D:
    """Map an s-grid to radial distances ``r = r_max / s``.

    Each s-cell is mapped to its exact r-cell, so the weights are the r-cell
    lengths and still sum to ``r_max - r_min``.  Nodes are returned in
    ascending r, i.e. in reverse s order.
    """
    h = s_grid.weights
    left = s_grid.nodes - h / 2
    right = s_grid.nodes + h / 2
    nodes = r_max / s_grid.nodes
    weights = r_max / left - r_max / right
    lo, hi = s_grid.interval
    return Grid1D(nodes[::-1], weights[::-1], (r_max / hi, r_max / lo))


def source_grid(config: ProblemConfig) -> Grid1D:
    return uniform_grid(-config.a, config.a, config.n_x)


def u_grid(config: ProblemConfig) -> Grid1D:
    return uniform_grid(-config.u_max, config.u_max, config.n_u)


def observation_r_grid(config: ProblemConfig) -> Grid1D:
    """Default radial grid: uniform in s, mapped back to r."""
    return r_grid_from_s(s_grid_from_r(config), config.r_max)
