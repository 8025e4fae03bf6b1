"""Discretized paraxial radiation operator of a strip current."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import ProblemConfig
from .grids import Grid1D, TensorGrid2D

Grid = Union[Grid1D, TensorGrid2D]


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ComplexOperatorMatrix:
    """Dense matrix of a discretized integral operator.

    Rows are indexed by ``row_grid`` and columns by ``col_grid``.  When
    ``quadrature_absorbed`` is set, the column quadrature weights are already
    multiplied into ``entries`` so that applying the operator is a plain
    matrix-vector product.
    """

    entries: np.ndarray
    row_grid: Grid
    col_grid: Grid
    quadrature_absorbed: bool = True

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if entries.shape != (self.row_grid.size, self.col_grid.size):
            raise DimensionMismatchError(
                f"entries have shape {entries.shape}, grids imply "
                f"({self.row_grid.size}, {self.col_grid.size})"
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def row_weights(self) -> np.ndarray:
        return self.row_grid.weights

    @property
    def col_weights(self) -> np.ndarray:
        return self.col_grid.weights

    def apply(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector)
        if vector.shape != (self.shape[1],):
            raise DimensionMismatchError(
                f"operator expects a vector of length {self.shape[1]}, got shape {vector.shape}"
            )
        return self.entries @ vector


def fresnel_rows(beta: float, r: np.ndarray, u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Integrand factors ``exp(-j beta x^2 / 2r) exp(j beta u x)`` for each (r, u) row."""
    r = np.asarray(r, dtype=float)[:, None]
    u = np.asarray(u, dtype=float)[:, None]
    return np.exp(1j * beta * (u * x[None, :] - x[None, :] ** 2 / (2.0 * r)))


def assemble_T(
    config: ProblemConfig, x_grid: Grid1D, r_grid: Grid1D, u_grid: Grid1D
) -> ComplexOperatorMatrix:
    """Radiation operator mapping source samples ``J(x_k)`` to ``E(r_i, u_j)``.

    Rows follow the ``(r, u)`` tensor grid with u fastest.  The unimodular
    phase ``exp(-j beta r (1 + u^2/2))`` is kept so that the field matches the
    paraxial radiation integral literally.
    """
    beta = config.beta
    obs = TensorGrid2D(r_grid, u_grid)
    r, u = obs.flat_nodes()
    prefactor = np.exp(-1j * beta * r * (1.0 + 0.5 * u**2)) / np.sqrt(beta * r)
    entries = prefactor[:, None] * fresnel_rows(beta, r, u, x_grid.nodes) * x_grid.weights[None, :]
    return ComplexOperatorMatrix(entries, obs, x_grid, quadrature_absorbed=True)


def apply_T(T_matrix: ComplexOperatorMatrix, J_samples: np.ndarray) -> np.ndarray:
    """Field samples on the observation grid, flattened (u fastest)."""
    return T_matrix.apply(J_samples)


def squared_field(T_matrix: ComplexOperatorMatrix, J_samples: np.ndarray) -> np.ndarray:
    """Squared field amplitude ``|T J|^2`` (the phaseless data)."""
    field = apply_T(T_matrix, J_samples)
    return field.real**2 + field.imag**2
