"""Lifting operator, its plain and weighted adjoints, and the separable approximation.

The quadratic data ``|E(r, u)|^2`` is linear in ``F(x, x') = J(x) J*(x')``.
The lifted unknown is flattened row-major over ``(x, x')`` so that
``vec(J J^H)`` is ``np.outer(J, J.conj()).ravel()``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import zherk

from .config import ProblemConfig
from .forward import ComplexOperatorMatrix, DimensionMismatchError, fresnel_rows
from .grids import Grid1D, TensorGrid2D

logger = logging.getLogger(__name__)


class DiagonalPointError(ValueError):
    """The weight of the change of variables is undefined on ``x == x'``."""


def sinc(t):
    """Unnormalized sinc, ``sin(t) / t`` with ``sinc(0) = 1``."""
    return np.sinc(np.asarray(t, dtype=float) / np.pi)


def assemble_A(
    config: ProblemConfig, xx_grid: TensorGrid2D, r_grid: Grid1D, u_grid: Grid1D
) -> ComplexOperatorMatrix:
    """Lifting operator taking ``F(x, x')`` to ``|E(r, u)|^2``.

    Entry ``[(r_i, u_j), (x_k, x'_l)]`` is
    ``exp(j beta (x'^2 - x^2) / 2r) exp(-j beta u (x' - x)) w_k w_l / (beta r)``.
    Each row is the outer product of a radiation-operator row with its
    conjugate, which is how it is built here.
    """
    if not isinstance(xx_grid, TensorGrid2D):
        raise DimensionMismatchError("the lifted source grid must be a TensorGrid2D")
    beta = config.beta
    obs = TensorGrid2D(r_grid, u_grid)
    r, u = obs.flat_nodes()
    rows_x = fresnel_rows(beta, r, u, xx_grid.axis1.nodes) * xx_grid.axis1.weights
    rows_xb = fresnel_rows(beta, r, u, xx_grid.axis2.nodes) * xx_grid.axis2.weights
    rows_x /= (beta * r)[:, None]
    entries = (rows_x[:, :, None] * rows_xb.conj()[:, None, :]).reshape(obs.size, -1)
    return ComplexOperatorMatrix(entries, obs, xx_grid, quadrature_absorbed=True)


def weight_function(x: float, xbar: float, r_max: float) -> float:
    """Inverse Jacobian magnitude of ``(x, x') -> (x' - x, (x'^2 - x^2) / r_max)``.

    >>> weight_function(-1.0, 1.0, 100.0)
    0.04
    """
    if x == xbar:
        raise DiagonalPointError(f"weight undefined on the diagonal x = x' = {x}")
    return 2.0 * abs(xbar - x) / r_max


def lifted_weights(xx_grid: TensorGrid2D, r_max: float) -> np.ndarray:
    """``weight_function`` on every grid pair, with 0 on coincident pairs."""
    x, xbar = xx_grid.flat_nodes()
    weights = 2.0 * np.abs(xbar - x) / r_max
    weights[x == xbar] = 0.0
    return weights


def assemble_A_adjoint(
    A: ComplexOperatorMatrix, weighted: bool, config: ProblemConfig
) -> ComplexOperatorMatrix:
    """Discrete L2 adjoint of ``A``, optionally multiplied by the lifting weight.

    The adjoint integrates over the data domain, so the data quadrature
    weights are absorbed into its columns in place of the source weights.
    """
    if not A.quadrature_absorbed:
        raise ValueError("expected an operator with absorbed column weights")
    entries = A.entries.conj().T
    entries /= A.col_weights[:, None]
    entries *= A.row_weights[None, :]
    if weighted:
        entries *= lifted_weights(A.col_grid, config.r_max)[:, None]
    return ComplexOperatorMatrix(entries, A.col_grid, A.row_grid, quadrature_absorbed=True)


def compose(left: ComplexOperatorMatrix, right: ComplexOperatorMatrix) -> ComplexOperatorMatrix:
    """Matrix product of two discretized operators with absorbed weights."""
    if left.shape[1] != right.shape[0]:
        raise DimensionMismatchError(f"cannot compose {left.shape} with {right.shape}")
    return ComplexOperatorMatrix(
        left.entries @ right.entries, left.row_grid, right.col_grid, quadrature_absorbed=True
    )


def gram_operator(
    A: ComplexOperatorMatrix, weighted: bool, config: ProblemConfig, block_size: int = 2048
) -> ComplexOperatorMatrix:
    """``A A^dagger`` (or ``A A_w^dagger``) without materializing the adjoint.

    Equal to ``compose(A, assemble_A_adjoint(A, weighted, config))``.  Because
    the adjoint is a rescaled conjugate transpose with a nonnegative column
    scaling, the product is accumulated as a Hermitian rank-k update over
    column blocks of ``A``, which halves the work and bounds the memory.
    """
    col_scale = 1.0 / A.col_weights
    if weighted:
        col_scale = col_scale * lifted_weights(A.col_grid, config.r_max)
    col_scale = np.sqrt(col_scale)
    n_rows, n_cols = A.shape
    gram = np.zeros((n_rows, n_rows), dtype=complex, order="F")
    for start in range(0, n_cols, block_size):
        stop = min(start + block_size, n_cols)
        block = np.asfortranarray(A.entries[:, start:stop] * col_scale[start:stop])
        gram = zherk(1.0, block, beta=1.0, c=gram, lower=0, overwrite_c=1)
    upper = np.triu(gram)
    gram = upper + np.triu(upper, 1).conj().T
    gram *= A.row_weights[None, :]
    logger.debug("assembled %s Gram operator of size %d", "weighted" if weighted else "plain", n_rows)
    return ComplexOperatorMatrix(gram, A.row_grid, A.row_grid, quadrature_absorbed=True)


def map_to_lifted(x, xbar, r_max: float):
    """Change of variables ``X1 = x' - x``, ``X2 = (x'^2 - x^2) / r_max``."""
    x = np.asarray(x, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    X1 = xbar - x
    X2 = (xbar**2 - x**2) / r_max
    if X1.ndim == 0:
        return float(X1), float(X2)
    return X1, X2


@dataclass(frozen=True, eq=False)
class LiftedDomainSample:
    """Images ``(X1, X2)`` of off-diagonal source pairs and the enclosing box."""

    points: np.ndarray
    bounding_box: tuple[tuple[float, float], tuple[float, float]]
    seed: int

    @property
    def extent(self) -> tuple[tuple[float, float], tuple[float, float]]:
        lo = self.points.min(axis=0)
        hi = self.points.max(axis=0)
        return (float(lo[0]), float(hi[0])), (float(lo[1]), float(hi[1]))


def sample_lifted_domain(config: ProblemConfig, n_samples: int, seed: int = 0) -> LiftedDomainSample:
    """Map a uniform sample of the off-diagonal source square to ``(X1, X2)``.

    The first two samples are the corners ``(-a, a)`` and ``(a, -a)``, whose
    images ``(+-2a, 0)`` touch the enclosing rectangle; the rest are drawn
    uniformly with a fixed seed.  Diagonal pairs (image ``(0, 0)``) are
    rejected and redrawn.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    a = config.a
    corners = np.array([[-a, a], [a, -a]])[:n_samples]
    rng = np.random.default_rng(seed)
    draws = []
    remaining = n_samples - len(corners)
    while remaining > 0:
        pairs = rng.uniform(-a, a, size=(remaining, 2))
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        draws.append(pairs)
        remaining -= len(pairs)
    pairs = np.vstack([corners, *draws]) if draws else corners
    X1, X2 = map_to_lifted(pairs[:, 0], pairs[:, 1], config.r_max)
    box = ((-2.0 * a, 2.0 * a), (-(a**2) / config.r_max, a**2 / config.r_max))
    return LiftedDomainSample(np.column_stack([X1, X2]), box, seed)


def approx_kernel_H(r, r_o, u, u_o, config: ProblemConfig):
    """Kernel of ``A A_w^dagger`` integrated over the rectangle enclosing the lifted domain.

    ``8 a^3 / (beta^2 r_max r r_o) * sinc(beta a^2 (1/r_o - 1/r) / 2) * sinc(2 beta a (u_o - u))``
    """
    a, beta, r_max = config.a, config.beta, config.r_max
    r = np.asarray(r, dtype=float)
    r_o = np.asarray(r_o, dtype=float)
    radial = sinc(0.5 * beta * a**2 * (1.0 / r_o - 1.0 / r))
    angular = sinc(2.0 * beta * a * (np.asarray(u_o, dtype=float) - np.asarray(u, dtype=float)))
    value = 8.0 * a**3 / (beta**2 * r_max) / (r * r_o) * radial * angular
    return float(value) if np.ndim(value) == 0 else value


def assemble_AAdag_approx(
    config: ProblemConfig, s_grid: Grid1D, u_grid: Grid1D, symmetrized: bool
) -> ComplexOperatorMatrix:
    """Separable approximation of ``A A_w^dagger`` in ``(s, u)`` with ``s = r_max / r``.

    The kernel is ``C (s_o / s) sinc(omega_s (s_o - s)) sinc(omega_u (u_o - u))``
    with ``C = 8 a^3 / (beta^2 r_max^2)``.  ``symmetrized=True`` drops the
    ``s_o / s`` factor, a diagonal similarity that leaves the eigenvalues
    unchanged and makes the matrix real symmetric.  Entries are real.
    """
    s, u = s_grid.nodes, u_grid.nodes
    k_s = sinc(config.omega_s * (s[:, None] - s[None, :])) * s_grid.weights[None, :]
    if not symmetrized:
        k_s = k_s * (s[:, None] / s[None, :])
    k_u = sinc(config.omega_u * (u[:, None] - u[None, :])) * u_grid.weights[None, :]
    grid = TensorGrid2D(s_grid, u_grid)
    entries = config.approx_prefactor * np.kron(k_s, k_u)
    return ComplexOperatorMatrix(entries, grid, grid, quadrature_absorbed=True)
