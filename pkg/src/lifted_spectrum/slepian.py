"""Eigenvalues of sinc-kernel (Slepian-Pollak) operators on an interval."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import ProblemConfig
from .grids import s_grid_from_r, u_grid, uniform_grid
from .lifting import sinc
from .spectra import DEFAULT_TAU_DB, SpectrumResult, detect_critical_index


class UnderResolvedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SlepianSpectrum:
    """Normalized eigenvalues of ``f -> int sinc(omega (t - t')) f(t') dt'``.

    Eigenvalues are divided by ``pi / omega`` so that they lie in ``(0, 1]``.
    """

    omega: float
    half_width: float
    eigenvalues: np.ndarray

    @property
    def shannon(self) -> float:
        return 2.0 * self.omega * self.half_width / math.pi

    def count_above(self, level: float = 0.5) -> int:
        return int(np.count_nonzero(self.eigenvalues > level))

    def __len__(self):
        return len(self.eigenvalues)


def slepian_spectrum(omega: float, lo: float, hi: float, n: int) -> SlepianSpectrum:
    """Nystrom eigenvalues of the sinc kernel of bandwidth ``omega`` on ``[lo, hi]``.

    Parameters
    ----------
    omega : float
        Kernel bandwidth; the kernel is ``sin(omega t) / (omega t)``.
    lo, hi : float
        Interval of the operator.
    n : int
        Number of midpoint nodes; must be at least ``2 * shannon + 20``.

    Returns
    -------
    SlepianSpectrum
        Descending eigenvalues normalized by ``pi / omega``.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    grid = uniform_grid(lo, hi, n)
    half_width = 0.5 * (hi - lo)
    shannon = 2.0 * omega * half_width / math.pi
    if n < 2.0 * shannon + 20:
        raise UnderResolvedError(
            f"{n} nodes cannot resolve a sinc operator with Shannon number {shannon:.2f}; "
            f"need at least {math.ceil(2 * shannon + 20)}"
        )
    t = grid.nodes
    root = np.sqrt(grid.weights)
    kernel = root[:, None] * sinc(omega * (t[:, None] - t[None, :])) * root[None, :]
    eigvals = scipy.linalg.eigvalsh(kernel, overwrite_a=True, check_finite=False)[::-1]
    return SlepianSpectrum(omega, half_width, eigvals * omega / math.pi)


def axis_spectra(config: ProblemConfig) -> tuple[SlepianSpectrum, SlepianSpectrum]:
    """The u-axis and s-axis sinc spectra on the configured data grids."""
    ug, sg = u_grid(config), s_grid_from_r(config)
    spec_u = slepian_spectrum(config.omega_u, *ug.interval, len(ug))
    spec_s = slepian_spectrum(config.omega_s, *sg.interval, len(sg))
    return spec_u, spec_s


def product_scale(config: ProblemConfig) -> float:
    """Factor turning products of normalized eigenvalues into eigenvalues of the approximation."""
    return config.approx_prefactor * (math.pi / config.omega_u) * (math.pi / config.omega_s)


def product_spectrum(
    spec_u: SlepianSpectrum,
    spec_s: SlepianSpectrum,
    scale: float,
    sqrt: bool = False,
    tau_db: float = DEFAULT_TAU_DB,
) -> SpectrumResult:
    """All pairwise products ``scale * lambda_u[i] * lambda_s[j]``, descending.

    Roundoff negatives of the factors are clamped to zero.  With
    ``sqrt=True`` the square roots are returned instead, which is the scale
    on which the operator spectra are compared.
    """
    lam_u = np.clip(spec_u.eigenvalues, 0.0, None)
    lam_s = np.clip(spec_s.eigenvalues, 0.0, None)
    values = np.sort(scale * np.outer(lam_u, lam_s).ravel())[::-1]
    if sqrt:
        values = np.sqrt(values)
    critical = detect_critical_index(values, tau_db) if values[0] > 0 else 1
    return SpectrumResult(values, "product_closed_form", critical, tau_db)
