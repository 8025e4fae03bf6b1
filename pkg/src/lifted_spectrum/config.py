"""Problem geometry and the closed-form data-space bounds.

All lengths are expressed in wavelengths, so the wavenumber is fixed at 2*pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

BETA = 2.0 * math.pi

# Heuristic limits of the paraxial Fresnel model; only used for warnings.
FRESNEL_RMIN_FACTOR = 2.0
PARAXIAL_UMAX = 0.7

# Slack used when taking integer ceilings of the bound indices, so that
# 41.000000000000007 reports 41 rather than 42.
_CEIL_SLACK = 1e-9


class InvalidConfigError(ValueError):
    """Raised when a configuration violates a geometric or grid constraint.

    Parameters
    ----------
    field : str
        Name of the offending configuration field.
    message : str
        Human readable description.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class ProblemConfig:
    """Geometry, discretization and significance threshold of one experiment.

    Defaults reproduce the strip of half-width 10 wavelengths observed on
    ``[25, 100] x [-0.5, 0.5]`` in ``(r, u)``.
    """

    a: float = 10.0
    u_max: float = 0.5
    r_min: float = 25.0
    r_max: float = 100.0
    n_x: int = 121
    n_u: int = 164
    n_s: int = 32
    tau_db: float = -40.0

    def __post_init__(self):
        for name in ("a", "u_max", "r_min", "r_max", "tau_db"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidConfigError(name, f"expected a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidConfigError(name, "must be finite")
        for name in ("n_x", "n_u", "n_s"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise InvalidConfigError(name, f"expected an integer, got {value!r}")
            if value < 2:
                raise InvalidConfigError(name, f"need at least 2 grid points, got {value}")
        if self.a <= 0:
            raise InvalidConfigError("a", "strip half-width must be positive")
        if not 0 < self.u_max <= 1:
            raise InvalidConfigError("u_max", "must lie in (0, 1]")
        if self.r_min <= 0:
            raise InvalidConfigError("r_min", "must be positive")
        if self.r_max <= self.r_min:
            raise InvalidConfigError("r_max", "must exceed r_min")
        if self.tau_db >= 0:
            raise InvalidConfigError("tau_db", "threshold must be negative (dB below the peak)")

    @property
    def beta(self) -> float:
        return BETA

    @property
    def s_max(self) -> float:
        """Upper end of ``s = r_max / r``; the lower end is always 1."""
        return self.r_max / self.r_min

    @property
    def omega_u(self) -> float:
        """Bandwidth of the u-axis sinc kernel, ``2 beta a``."""
        return 2.0 * self.beta * self.a

    @property
    def omega_s(self) -> float:
        """Bandwidth of the s-axis sinc kernel, ``beta a^2 / (2 r_max)``."""
        return self.beta * self.a**2 / (2.0 * self.r_max)

    @property
    def approx_prefactor(self) -> float:
        """Constant ``8 a^3 / (beta^2 r_max^2)`` in front of the separable kernel."""
        return 8.0 * self.a**3 / (self.beta**2 * self.r_max**2)

    def to_dict(self) -> dict:
        return {
            "geometry": {"a": self.a, "u_max": self.u_max, "r_min": self.r_min, "r_max": self.r_max},
            "grids": {"n_x": self.n_x, "n_u": self.n_u, "n_s": self.n_s},
            "analysis": {"tau_db": self.tau_db},
        }


@dataclass(frozen=True)
class BoundResult:
    m_u: float
    m_s: float
    m_bar: float

    @property
    def m_u_ceil(self) -> int:
        return _ceil(self.m_u)

    @property
    def m_s_ceil(self) -> int:
        return _ceil(self.m_s)

    @property
    def m_bar_ceil(self) -> int:
        return _ceil(self.m_bar)

    @property
    def m_bar_floor(self) -> int:
        return math.floor(self.m_bar + _CEIL_SLACK)


def _ceil(value: float) -> int:
    return math.ceil(value - _CEIL_SLACK)


def compute_bounds(config: ProblemConfig) -> BoundResult:
    """Indices after which the u- and s-axis sinc spectra become negligible.

    ``m_u = (4/pi) beta a u_max + 1`` and
    ``m_s = beta a^2 (1/r_min - 1/r_max) / (2 pi) + 1``; their product bounds
    the number of significant singular values of the lifting operator.
    Values are kept real; integer ceilings are exposed as properties.
    """
    if not isinstance(config, ProblemConfig):
        raise InvalidConfigError("config", f"expected ProblemConfig, got {type(config).__name__}")
    beta, a = config.beta, config.a
    m_u = 4.0 / math.pi * beta * a * config.u_max + 1.0
    m_s = beta * a**2 / (2.0 * math.pi) * (1.0 / config.r_min - 1.0 / config.r_max) + 1.0
    return BoundResult(m_u=m_u, m_s=m_s, m_bar=m_u * m_s)


def validate_fresnel_regime(config: ProblemConfig) -> list[str]:
    """Return non-fatal warnings about the validity of the paraxial model."""
    warnings = []
    if config.r_min < FRESNEL_RMIN_FACTOR * config.a:
        warnings.append(
            f"fresnel: r_min={config.r_min:g} is below 2a={FRESNEL_RMIN_FACTOR * config.a:g}; "
            "the paraxial Fresnel approximation is questionable"
        )
    if config.u_max > PARAXIAL_UMAX:
        warnings.append(
            f"paraxial: u_max={config.u_max:g} exceeds {PARAXIAL_UMAX:g}; "
            "the quadratic phase expansion is strained"
        )
    return warnings
