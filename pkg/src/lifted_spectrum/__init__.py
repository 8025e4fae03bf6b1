"""Data-space dimension of Fresnel-zone phase retrieval via the lifting operator.

The package assembles the discretized radiation operator of a strip current,
lifts the quadratic data model to a linear operator on ``J(x) J*(x')`` and
compares its singular value spectrum with the closed-form product of two
sinc-kernel (Slepian-Pollak) spectra.
"""
from .config import (
    BoundResult,
    InvalidConfigError,
    ProblemConfig,
    compute_bounds,
    validate_fresnel_regime,
)
from .grids import Grid1D, TensorGrid2D, r_grid_from_s, s_grid_from_r, uniform_grid
from .forward import (
    ComplexOperatorMatrix,
    DimensionMismatchError,
    apply_T,
    assemble_T,
    squared_field,
)
from .lifting import (
    DiagonalPointError,
    LiftedDomainSample,
    approx_kernel_H,
    assemble_A,
    assemble_A_adjoint,
    assemble_AAdag_approx,
    compose,
    gram_operator,
    map_to_lifted,
    sample_lifted_domain,
    weight_function,
)
from .spectra import (
    NumericalError,
    SpectrumResult,
    detect_critical_index,
    eig_spectrum,
    svd_spectrum,
)
from .slepian import SlepianSpectrum, UnderResolvedError, product_spectrum, slepian_spectrum

__version__ = "0.1.0"
