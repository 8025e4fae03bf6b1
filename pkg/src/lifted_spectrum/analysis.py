"""End-to-end spectra for a configuration and the cross-module property checks."""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import ProblemConfig, compute_bounds
from .forward import assemble_T, squared_field
from .grids import TensorGrid2D, observation_r_grid, s_grid_from_r, source_grid, u_grid
from .lifting import assemble_A, assemble_AAdag_approx, gram_operator
from .slepian import axis_spectra, product_scale, product_spectrum
from .spectra import NumericalError, SpectrumResult, eig_spectrum, svd_spectrum

logger = logging.getLogger(__name__)

OPERATOR_KINDS = ("lifting", "weighted", "approx", "product")

# Identity checks do not depend on the resolution, so they run on a grid no
# larger than this to keep the dense SVD cheap.
CHECK_GRID_CAP = {"n_x": 41, "n_u": 48, "n_s": 12}
DEFAULT_SEED = 0


def lifting_operator(config: ProblemConfig):
    x = source_grid(config)
    return assemble_A(config, TensorGrid2D(x, x), observation_r_grid(config), u_grid(config))


def operator_spectrum(config: ProblemConfig, kind: str) -> SpectrumResult:
    """Spectrum of one of the compared operators on the configured grids.

    ``lifting`` and ``weighted`` are the square roots of the eigenvalues of
    ``A A^dagger`` and ``A A_w^dagger``; ``approx`` uses the separable
    kernel in its unsymmetrized ``(s_o / s)`` form; ``product`` is the
    closed-form product of the two sinc spectra.
    """
    if kind == "lifting":
        gram = gram_operator(lifting_operator(config), weighted=False, config=config)
        return eig_spectrum(gram, hermitian=True, config=config, kind="sqrt_eig_AAdag")
    if kind == "weighted":
        gram = gram_operator(lifting_operator(config), weighted=True, config=config)
        return eig_spectrum(gram, hermitian=False, config=config, kind="sqrt_eig_AAdag_w")
    if kind == "approx":
        approx = assemble_AAdag_approx(config, s_grid_from_r(config), u_grid(config), symmetrized=False)
        return eig_spectrum(approx, hermitian=False, config=config, kind="sqrt_eig_approx")
    if kind == "product":
        spec_u, spec_s = axis_spectra(config)
        return product_spectrum(spec_u, spec_s, product_scale(config), sqrt=True, tau_db=config.tau_db)
    raise ValueError(f"unknown operator kind {kind!r}; expected one of {', '.join(OPERATOR_KINDS)}")


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: error={self.error:.3e} tol={self.tolerance:.1e}"
        return f"{text} ({self.detail})" if self.detail else text


def check_grid_config(config: ProblemConfig) -> ProblemConfig:
    caps = {k: min(getattr(config, k), v) for k, v in CHECK_GRID_CAP.items()}
    return dataclasses.replace(config, **caps)


def lifting_consistency_error(config: ProblemConfig, n_trials: int = 20, seed: int = DEFAULT_SEED) -> float:
    """Largest ``max|A vec(J J^H) - |T J|^2| / max|T J|^2`` over random complex sources."""
    x = source_grid(config)
    r, u = observation_r_grid(config), u_grid(config)
    T = assemble_T(config, x, r, u)
    A = assemble_A(config, TensorGrid2D(x, x), r, u)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_trials):
        J = rng.standard_normal(len(x)) + 1j * rng.standard_normal(len(x))
        data = squared_field(T, J)
        lifted = A.apply(np.outer(J, J.conj()).ravel())
        worst = max(worst, np.abs(lifted - data).max() / np.abs(data).max())
    return float(worst)


def gram_consistency_error(config: ProblemConfig, floor: float = 1e-6) -> float:
    """Gap between singular values of A and square roots of the eigenvalues of A A^dagger.

    Measured relative to the largest singular value, over indices whose
    value exceeds ``floor`` times the largest.
    """
    A = lifting_operator(config)
    sv = svd_spectrum(A, config=config).values
    ev = eig_spectrum(gram_operator(A, weighted=False, config=config), hermitian=True, config=config).values
    n = min(len(sv), len(ev))
    sv, ev = sv[:n], ev[:n]
    keep = sv > floor * sv[0]
    return float(np.abs(sv[keep] - ev[keep]).max() / sv[0])


def approx_eigenvalues(config: ProblemConfig) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of the symmetrized and unsymmetrized separable operator.

    Both are sorted by descending magnitude; the symmetric ones are real.
    """
    s, u = s_grid_from_r(config), u_grid(config)
    sym = assemble_AAdag_approx(config, s, u, symmetrized=True)
    unsym = assemble_AAdag_approx(config, s, u, symmetrized=False)
    sym_vals = eig_spectrum(sym, hermitian=True, config=config, kind="sqrt_eig_approx").values ** 2
    unsym_vals = eig_spectrum(unsym, hermitian=False, config=config, kind="sqrt_eig_approx").values ** 2
    return sym_vals, unsym_vals


def similarity_error(sym_vals: np.ndarray, unsym_vals: np.ndarray) -> float:
    return float(np.abs(sym_vals - unsym_vals).max() / sym_vals[0])


def tensor_product_error(config: ProblemConfig, sym_vals: np.ndarray, top: int = 200) -> float:
    spec_u, spec_s = axis_spectra(config)
    products = product_spectrum(spec_u, spec_s, product_scale(config), tau_db=config.tau_db).values
    top = min(top, len(sym_vals))
    return float(np.abs(sym_vals[:top] - products[:top]).max() / products[0])


def bound_check(config: ProblemConfig) -> PropertyCheck:
    """The sinc spectra plunge where the closed-form indices say they should."""
    bounds = compute_bounds(config)
    spec_u, spec_s = axis_spectra(config)
    count_u, count_s = spec_u.count_above(0.5), spec_s.count_above(0.5)
    gap = max(abs(count_u - (bounds.m_u - 1)), abs(count_s - (bounds.m_s - 1)))
    product_gap = abs(bounds.m_bar - bounds.m_u * bounds.m_s)
    detail = (
        f"M_u={bounds.m_u:g} M_s={bounds.m_s:g} M_bar={bounds.m_bar:g}; "
        f"eigenvalues above 0.5: u={count_u} s={count_s}"
    )
    return PropertyCheck("bound_check", gap <= 1 and product_gap <= 1e-9, float(gap), 1.0, detail)


def run_property_suite(config: ProblemConfig, log: Callable[[str], None] = print) -> list[PropertyCheck]:
    """Run every cross-module identity; each result is logged as soon as it is known."""
    checks = []

    def record(check: PropertyCheck):
        checks.append(check)
        log(check.line())

    small = check_grid_config(config)
    err = lifting_consistency_error(small)
    record(PropertyCheck("lifting_consistency", err < 1e-10, err, 1e-10, f"20 random sources, n_x={small.n_x}"))

    err = gram_consistency_error(small)
    record(PropertyCheck("gram_consistency", err < 1e-8, err, 1e-8, f"{small.n_u * small.n_s} data points"))

    try:
        sym_vals, unsym_vals = approx_eigenvalues(config)
    except (ValueError, NumericalError, np.linalg.LinAlgError) as exc:
        for name in ("similarity_invariance", "tensor_product_exactness"):
            record(PropertyCheck(name, False, float("nan"), 0.0, f"{type(exc).__name__}: {exc}"))
    else:
        err = similarity_error(sym_vals, unsym_vals)
        record(PropertyCheck("similarity_invariance", err < 1e-8, err, 1e-8))
        try:
            err = tensor_product_error(config, sym_vals)
        except ValueError as exc:
            record(PropertyCheck("tensor_product_exactness", False, float("nan"), 1e-10, str(exc)))
        else:
            record(PropertyCheck("tensor_product_exactness", err < 1e-10, err, 1e-10, "top 200"))

    try:
        record(bound_check(config))
    except ValueError as exc:
        record(PropertyCheck("bound_check", False, float("nan"), 1.0, str(exc)))
    return checks
