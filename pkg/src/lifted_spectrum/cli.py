"""Command line interface.

Exit codes: 0 success, 1 property failure, 2 configuration error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import dataclasses
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import report
from .analysis import OPERATOR_KINDS, operator_spectrum, run_property_suite
from .config import InvalidConfigError, compute_bounds, validate_fresnel_regime
from .grids import InvalidIntervalError
from .lifting import sample_lifted_domain
from .slepian import UnderResolvedError, axis_spectra
from .spectra import NumericalError

EXIT_OK, EXIT_PROPERTY, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
THREADS_ENV = "LIFTED_SPECTRUM_THREADS"

logger = logging.getLogger("lifted_spectrum")


def build_parser() -> argparse.ArgumentParser:
    # Global options are accepted both before and after the subcommand.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON config (default: packaged test case)")
    common.add_argument("--tau-db", type=float, default=argparse.SUPPRESS, help="significance threshold in dB")
    common.add_argument("--svg", action="store_true", default=argparse.SUPPRESS, help="also write an SVG plot")
    common.add_argument("--manifest", default=argparse.SUPPRESS, help="manifest path (default: <out>.manifest.json)")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="lifted-spectrum",
        description="Spectra of the lifted Fresnel-zone phase retrieval operator.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common], help="print the closed-form bounds M_u, M_s, M_bar")
    p = sub.add_parser("spectrum", parents=[common], help="write an operator spectrum to CSV")
    p.add_argument("--operator", required=True, choices=OPERATOR_KINDS)
    p.add_argument("--out", required=True)
    p = sub.add_parser("slepian", parents=[common], help="write a sinc-kernel spectrum to CSV")
    p.add_argument("--axis", required=True, choices=("u", "s"))
    p.add_argument("--out", required=True)
    p = sub.add_parser("domain", parents=[common], help="write samples of the lifted integration domain")
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=4000)
    p.add_argument("--seed", type=int, default=0)
    sub.add_parser("verify", parents=[common], help="run the property suite")
    return parser


def _threads_limit():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return contextlib.nullcontext()
    try:
        n = int(value)
    except ValueError:
        raise InvalidConfigError(THREADS_ENV, f"expected an integer, got {value!r}") from None
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(n, 1))


def _load(args):
    config = report.load_config(getattr(args, "config", None))
    if getattr(args, "tau_db", None) is not None:
        config = dataclasses.replace(config, tau_db=args.tau_db)
    return config


def _manifest_path(args, out=None):
    if getattr(args, "manifest", None):
        return Path(args.manifest)
    if out is not None:
        return Path(out).with_suffix(".manifest.json")
    return None


def cmd_bounds(args, config, manifest):
    bounds = compute_bounds(config)
    print(f"M_u={bounds.m_u_ceil} M_s={bounds.m_s_ceil} M_bar={bounds.m_bar_ceil}")
    print(f"real: M_u={bounds.m_u:.6g} M_s={bounds.m_s:.6g} M_bar={bounds.m_bar:.6g}")
    manifest.results.update(
        m_u=bounds.m_u, m_s=bounds.m_s, m_bar=bounds.m_bar,
        m_u_ceil=bounds.m_u_ceil, m_s_ceil=bounds.m_s_ceil, m_bar_ceil=bounds.m_bar_ceil,
    )
    return EXIT_OK


def cmd_spectrum(args, config, manifest):
    start = time.perf_counter()
    spectrum = operator_spectrum(config, args.operator)
    manifest.timings["spectrum"] = time.perf_counter() - start
    report.write_spectrum_csv(args.out, spectrum)
    manifest.add_artifact(args.out, "spectrum_csv")
    bounds = compute_bounds(config)
    manifest.results.update(
        operator=args.operator,
        kind=spectrum.kind,
        critical_index=spectrum.critical_index,
        threshold_db=spectrum.threshold_db,
        n_values=len(spectrum),
        n_complex_flags=len(spectrum.complex_eig_flags),
        m_bar=bounds.m_bar,
    )
    if spectrum.complex_eig_flags:
        manifest.warnings.append(
            f"{len(spectrum.complex_eig_flags)} eigenvalues have relative imaginary part above 1e-6"
        )
    if getattr(args, "svg", False):
        path = report.svg_path(args.out)
        report.plot_spectrum_svg(path, spectrum, bounds.m_bar)
        manifest.add_artifact(path, "spectrum_svg")
    print(f"{spectrum.kind}: critical index {spectrum.critical_index} at {spectrum.threshold_db:g} dB "
          f"(M_bar={bounds.m_bar:g})")
    return EXIT_OK


def cmd_slepian(args, config, manifest):
    spec_u, spec_s = axis_spectra(config)
    spectrum = spec_u if args.axis == "u" else spec_s
    report.write_slepian_csv(args.out, spectrum)
    manifest.add_artifact(args.out, "slepian_csv")
    count = spectrum.count_above(0.5)
    manifest.results.update(
        axis=args.axis, omega=spectrum.omega, half_width=spectrum.half_width,
        shannon=spectrum.shannon, count_above_half=count,
    )
    if getattr(args, "svg", False):
        path = report.svg_path(args.out)
        report.plot_slepian_svg(path, spectrum, args.axis)
        manifest.add_artifact(path, "slepian_svg")
    print(f"{args.axis}-axis: Shannon number {spectrum.shannon:.6g}, {count} eigenvalues above 0.5")
    return EXIT_OK


def cmd_domain(args, config, manifest):
    sample = sample_lifted_domain(config, args.samples, seed=args.seed)
    report.write_domain_csv(args.out, sample, config.a)
    manifest.add_artifact(args.out, "domain_csv")
    manifest.results.update(n_samples=args.samples, seed=args.seed, bounding_box=sample.bounding_box)
    if getattr(args, "svg", False):
        path = report.svg_path(args.out)
        report.plot_domain_svg(path, sample)
        manifest.add_artifact(path, "domain_svg")
    return EXIT_OK


def cmd_verify(args, config, manifest):
    start = time.perf_counter()
    checks = run_property_suite(config, log=lambda line: print(line, flush=True))
    manifest.timings["verify"] = time.perf_counter() - start
    manifest.results["properties"] = [dataclasses.asdict(c) for c in checks]
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return EXIT_PROPERTY
    print(f"all {len(checks)} properties passed")
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "spectrum": cmd_spectrum,
    "slepian": cmd_slepian,
    "domain": cmd_domain,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load(args)
        limit = _threads_limit()
    except (InvalidConfigError, InvalidIntervalError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    manifest = report.RunManifest(command=args.command, config=config.to_dict())
    manifest.warnings.extend(validate_fresnel_regime(config))
    for warning in manifest.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    start = time.perf_counter()
    try:
        with limit, np.errstate(all="ignore"):
            code = COMMANDS[args.command](args, config, manifest)
    except (InvalidConfigError, InvalidIntervalError, UnderResolvedError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, MemoryError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    manifest.timings["total"] = time.perf_counter() - start

    path = _manifest_path(args, getattr(args, "out", None))
    if path is not None:
        manifest.write(path)
    return code


if __name__ == "__main__":
    sys.exit(main())
