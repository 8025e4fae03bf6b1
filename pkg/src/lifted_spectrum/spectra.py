"""Singular value and eigenvalue spectra of assembled operators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .config import ProblemConfig
from .forward import ComplexOperatorMatrix

KINDS = ("svd_A", "sqrt_eig_AAdag", "sqrt_eig_AAdag_w", "sqrt_eig_approx", "product_closed_form")

DEFAULT_TAU_DB = -40.0
# Hermitian eigenvalues below -NEGATIVE_CLAMP * max are treated as a failure.
NEGATIVE_CLAMP = 1e-10
COMPLEX_FLAG_RTOL = 1e-6
# Imaginary parts below this (relative to the largest entry) are roundoff.
REAL_RTOL = 1e-12


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Descending nonnegative spectrum with its critical index.

    ``critical_index`` is the first index whose value is more than
    ``|threshold_db|`` dB below ``values[0]`` (``len(values)`` if none is).
    """

    values: np.ndarray
    kind: str
    critical_index: int
    threshold_db: float
    complex_eig_flags: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if self.kind not in KINDS:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        if values.ndim != 1 or len(values) == 0:
            raise ValueError("values must be a non-empty 1D array")
        if np.any(values < 0) or np.any(np.diff(values) > 0):
            raise ValueError("values must be nonnegative and descending")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def values_db(self) -> np.ndarray:
        """``20 log10(values / values[0])``; zeros map to ``-inf``."""
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(self.values / self.values[0])


def detect_critical_index(values, tau_db: float) -> int:
    """Smallest ``i`` with ``20 log10(values[i] / values[0]) < tau_db``.

    >>> detect_critical_index([1.0, 0.5, 1e-6], -40.0)
    2
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty spectrum")
    if not values[0] > 0:
        raise ValueError("spectrum is all zero (or not sorted descending)")
    with np.errstate(divide="ignore"):
        below = np.flatnonzero(20.0 * np.log10(values / values[0]) < tau_db)
    return int(below[0]) if below.size else len(values)


def _tau(config: Optional[ProblemConfig]) -> float:
    return DEFAULT_TAU_DB if config is None else config.tau_db


def _result(values: np.ndarray, kind: str, tau_db: float, flags=()) -> SpectrumResult:
    if values[0] > 0:
        critical = detect_critical_index(values, tau_db)
    else:
        critical = 1
    return SpectrumResult(values, kind, critical, tau_db, tuple(int(i) for i in flags))


def _maybe_real(matrix: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(matrix):
        scale = np.abs(matrix).max()
        if scale == 0 or np.abs(matrix.imag).max() <= REAL_RTOL * scale:
            return np.ascontiguousarray(matrix.real)
    return matrix


def svd_spectrum(
    A: ComplexOperatorMatrix,
    data_weights: Optional[np.ndarray] = None,
    config: Optional[ProblemConfig] = None,
) -> SpectrumResult:
    """Singular values of ``A`` between the discrete L2 spaces of its grids.

    The matrix is scaled to ``diag(sqrt(W)) K diag(sqrt(w))`` with ``K`` the
    raw kernel, ``W`` the data weights and ``w`` the source weights, so the
    result approximates the singular values of the continuous operator and
    squares to the eigenvalues of ``A A^dagger``.
    """
    if data_weights is None:
        data_weights = A.row_weights
    data_weights = np.asarray(data_weights, dtype=float)
    if data_weights.shape != (A.shape[0],) or np.any(data_weights < 0):
        raise ValueError("data_weights must be nonnegative with one entry per row")
    scaled = A.entries * np.sqrt(data_weights)[:, None]
    if A.quadrature_absorbed:
        scaled /= np.sqrt(A.col_weights)[None, :]
    try:
        values = scipy.linalg.svdvals(scaled, overwrite_a=True, check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    return _result(values, "svd_A", _tau(config))


def eig_spectrum(
    M: ComplexOperatorMatrix,
    hermitian: bool,
    config: Optional[ProblemConfig] = None,
    kind: Optional[str] = None,
) -> SpectrumResult:
    """Square roots of the eigenvalue magnitudes of a square operator, descending.

    With ``hermitian=True`` the operator must be self-adjoint in the
    weighted inner product of its grid: the matrix is symmetrized by the
    ``sqrt(weights)`` similarity and handed to a symmetric solver.  Small
    negative eigenvalues from roundoff are clamped to zero.

    With ``hermitian=False`` a general solver is used and eigenvalues are
    ranked by magnitude.  Indices (in the returned order) of eigenvalues
    with a relative imaginary part above 1e-6 are reported in
    ``complex_eig_flags``; eigenvalues below the roundoff floor are not
    flagged.
    """
    n_rows, n_cols = M.shape
    if n_rows != n_cols:
        raise ValueError(f"eigen-spectrum needs a square operator, got {M.shape}")
    if kind is None:
        kind = "sqrt_eig_AAdag" if hermitian else "sqrt_eig_AAdag_w"
    tau_db = _tau(config)
    try:
        if hermitian:
            matrix = M.entries
            if M.quadrature_absorbed:
                root = np.sqrt(M.col_weights)
                matrix = matrix * root[:, None] / root[None, :]
            scale = np.abs(matrix).max()
            if scale > 0 and np.abs(matrix - matrix.conj().T).max() > 1e-8 * scale:
                raise NumericalError("operator is not self-adjoint in its weighted inner product")
            matrix = _maybe_real(0.5 * (matrix + matrix.conj().T))
            eigvals = scipy.linalg.eigvalsh(matrix, overwrite_a=True, check_finite=False, driver="evd")
            top = max(eigvals.max(), 0.0)
            if eigvals.min() < -NEGATIVE_CLAMP * top:
                raise NumericalError(
                    f"Hermitian operator has a negative eigenvalue {eigvals.min():.3e} "
                    f"(largest {top:.3e})"
                )
            values = np.sqrt(np.clip(eigvals, 0.0, None))[::-1]
            return _result(values, kind, tau_db)

        matrix = _maybe_real(np.array(M.entries))
        eigvals = scipy.linalg.eigvals(matrix, overwrite_a=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    magnitude = np.abs(eigvals)
    order = np.argsort(magnitude, kind="stable")[::-1]
    eigvals, magnitude = eigvals[order], magnitude[order]
    floor = n_rows * np.finfo(float).eps * (magnitude[0] if magnitude.size else 0.0)
    flags = np.flatnonzero(
        (magnitude > floor) & (np.abs(eigvals.imag) > COMPLEX_FLAG_RTOL * magnitude)
    )
    return _result(np.sqrt(magnitude), kind, tau_db, flags)
