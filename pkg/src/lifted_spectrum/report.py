"""Configuration files, CSV output, run manifests and SVG plots."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .config import InvalidConfigError, ProblemConfig
from .lifting import LiftedDomainSample
from .slepian import SlepianSpectrum
from .spectra import SpectrumResult

ALLOWED_KEYS = {
    "geometry": {"a", "u_max", "theta_max_deg", "r_min", "r_max"},
    "grids": {"n_x", "n_u", "n_s"},
    "analysis": {"tau_db"},
}
# Zero spectrum values are written at this level so the dB column stays finite.
DB_FLOOR = -400.0


def default_config_text() -> str:
    return resources.files("lifted_spectrum").joinpath("data/default.json").read_text()


def parse_config(data, source: str = "<config>") -> ProblemConfig:
    """Build a ``ProblemConfig`` from the nested JSON structure.

    Missing keys take their defaults; unknown keys are rejected.  The angular
    extent may be given as ``theta_max_deg`` instead of ``u_max``, in which
    case ``u_max = sin(theta_max)``.
    """
    if not isinstance(data, dict):
        raise InvalidConfigError(source, "top level must be a JSON object")
    kwargs = {}
    for section, body in data.items():
        if section not in ALLOWED_KEYS:
            raise InvalidConfigError(section, "unknown top-level key")
        if not isinstance(body, dict):
            raise InvalidConfigError(section, "must be a JSON object")
        for key, value in body.items():
            if key not in ALLOWED_KEYS[section]:
                raise InvalidConfigError(f"{section}.{key}", "unknown key")
            kwargs[key] = value
    if "theta_max_deg" in kwargs:
        if "u_max" in kwargs:
            raise InvalidConfigError("geometry.theta_max_deg", "give either u_max or theta_max_deg, not both")
        theta = kwargs.pop("theta_max_deg")
        if isinstance(theta, bool) or not isinstance(theta, (int, float)) or not 0 < theta <= 90:
            raise InvalidConfigError("geometry.theta_max_deg", "must be a number in (0, 90]")
        kwargs["u_max"] = math.sin(math.radians(theta))
    for key in ("a", "u_max", "r_min", "r_max", "tau_db"):
        if isinstance(kwargs.get(key), int) and not isinstance(kwargs[key], bool):
            kwargs[key] = float(kwargs[key])
    return ProblemConfig(**kwargs)


def load_config(path: Optional[str | Path] = None) -> ProblemConfig:
    """Read a JSON config file; ``None`` loads the packaged default."""
    if path is None:
        text, source = default_config_text(), "default.json"
    else:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InvalidConfigError(str(path), f"cannot read config: {exc.strerror or exc}") from exc
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(source, f"invalid JSON: {exc}") from exc
    return parse_config(data, source)


@dataclass
class RunManifest:
    command: str
    config: dict
    artifacts: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def add_artifact(self, path: str | Path, kind: str):
        self.artifacts.append({"path": str(path), "kind": kind})

    def write(self, path: str | Path):
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_rows(path: str | Path, header: list[str], rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_spectrum_csv(path: str | Path, spectrum: SpectrumResult):
    db = np.maximum(spectrum.values_db, DB_FLOOR)
    flags = set(spectrum.complex_eig_flags)
    rows = (
        (i, _fmt(v), _fmt(d), int(i in flags)) for i, (v, d) in enumerate(zip(spectrum.values, db))
    )
    _write_rows(path, ["index", "value", "value_db", "flag_complex"], rows)


def write_slepian_csv(path: str | Path, spectrum: SlepianSpectrum):
    rows = ((i, _fmt(v)) for i, v in enumerate(spectrum.eigenvalues))
    _write_rows(path, ["index", "normalized_eigenvalue"], rows)


def domain_rows(sample: LiftedDomainSample, a: float):
    """Sample rows, the images of the off-diagonal corners of the source square, and the box corners."""
    rows = [("sample", x1, x2) for x1, x2 in sample.points]
    rows += [("corner_image", 2.0 * a, 0.0), ("corner_image", -2.0 * a, 0.0)]
    (x_lo, x_hi), (y_lo, y_hi) = sample.bounding_box
    rows += [("bounding_box", x, y) for x, y in ((x_lo, y_lo), (x_hi, y_lo), (x_hi, y_hi), (x_lo, y_hi))]
    return rows


def write_domain_csv(path: str | Path, sample: LiftedDomainSample, a: float):
    rows = ((kind, _fmt(x1), _fmt(x2)) for kind, x1, x2 in domain_rows(sample, a))
    _write_rows(path, ["kind", "X1", "X2"], rows)


def svg_path(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".svg")


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt, plt.subplots(figsize=(6.4, 4.0))


def _save(plt, fig, path: Path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_spectrum_svg(path: Path, spectrum: SpectrumResult, m_bar: Optional[float] = None):
    plt, (fig, ax) = _figure()
    db = np.maximum(spectrum.values_db, DB_FLOOR)
    ax.plot(np.arange(1, len(db) + 1), db, lw=1.2, label=spectrum.kind)
    ax.axhline(spectrum.threshold_db, color="0.5", ls=":", lw=0.8)
    ax.axvline(spectrum.critical_index, color="C1", ls="--", lw=0.8, label=f"critical index {spectrum.critical_index}")
    if m_bar is not None:
        ax.axvline(m_bar, color="k", ls="-.", lw=0.8, label=f"M_bar = {m_bar:g}")
    ax.set_xlim(1, min(len(db), 3 * spectrum.critical_index))
    ax.set_ylim(max(db.min(), spectrum.threshold_db - 40), 3)
    ax.set_xlabel("index")
    ax.set_ylabel("normalized value [dB]")
    ax.legend(fontsize=8)
    _save(plt, fig, path)


def plot_slepian_svg(path: Path, spectrum: SlepianSpectrum, label: str):
    plt, (fig, ax) = _figure()
    n = min(len(spectrum), int(math.ceil(spectrum.shannon)) + 20)
    ax.plot(np.arange(n), spectrum.eigenvalues[:n], "o-", ms=3, lw=1)
    ax.axvline(spectrum.shannon, color="0.5", ls=":", lw=0.8)
    ax.set_xlabel("index")
    ax.set_ylabel("normalized eigenvalue")
    ax.set_title(f"{label}-axis sinc operator, Shannon number {spectrum.shannon:.3g}")
    _save(plt, fig, path)


def plot_domain_svg(path: Path, sample: LiftedDomainSample):
    plt, (fig, ax) = _figure()
    ax.plot(sample.points[:, 0], sample.points[:, 1], ".", ms=1.5)
    (x_lo, x_hi), (y_lo, y_hi) = sample.bounding_box
    ax.plot([x_lo, x_hi, x_hi, x_lo, x_lo], [y_lo, y_lo, y_hi, y_hi, y_lo], "k--", lw=0.8)
    ax.set_xlabel("X1")
    ax.set_ylabel("X2")
    _save(plt, fig, path)
