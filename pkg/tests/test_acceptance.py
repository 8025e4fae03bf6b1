"""Exit criteria on the reference configuration.

Each test records a one-line PASS/FAIL verdict that pytest prints in its
terminal summary under "acceptance criteria".
"""
import dataclasses
import time

import numpy as np
import pytest

from lifted_spectrum import approx_kernel_H, compute_bounds, detect_critical_index
from lifted_spectrum.analysis import (
    approx_eigenvalues,
    lifting_consistency_error,
    operator_spectrum,
    similarity_error,
    tensor_product_error,
)
from lifted_spectrum.cli import main
from lifted_spectrum.slepian import axis_spectra

CRITICAL_BAND = (140, 172)
MAX_WEIGHTED_GAP = 10


@pytest.fixture(scope="module")
def approx_eigs(reference_config):
    start = time.perf_counter()
    sym_vals, unsym_vals = approx_eigenvalues(reference_config)
    return sym_vals, unsym_vals, time.perf_counter() - start


@pytest.fixture(scope="module")
def operator_spectra(reference_config):
    start = time.perf_counter()
    spectra = {kind: operator_spectrum(reference_config, kind) for kind in ("lifting", "weighted")}
    return spectra, time.perf_counter() - start


def test_1_bound_reproduction(reference_config, acceptance_report):
    b = compute_bounds(reference_config)
    ok = (b.m_u_ceil, b.m_s_ceil, b.m_bar_ceil) == (41, 4, 164) and abs(b.m_bar - 164) < 1e-12
    acceptance_report(1, "bound reproduction", ok, f"M_u={b.m_u:.15g} M_s={b.m_s:.15g} M_bar={b.m_bar:.15g}")
    assert ok


def test_2_lifting_consistency(reference_config, acceptance_report):
    cfg = dataclasses.replace(reference_config, n_x=81)
    start = time.perf_counter()
    err = lifting_consistency_error(cfg, n_trials=20, seed=0)
    elapsed = time.perf_counter() - start
    ok = err < 1e-10
    acceptance_report(2, "lifting consistency", ok, f"max rel error {err:.2e} < 1e-10 ({elapsed:.1f} s)")
    assert ok


def test_3_tensor_product_exactness(reference_config, approx_eigs, acceptance_report):
    sym_vals, _, elapsed = approx_eigs
    err = tensor_product_error(reference_config, sym_vals, top=200)
    ok = err < 1e-10
    acceptance_report(3, "tensor-product exactness", ok, f"top-200 rel error {err:.2e} < 1e-10 ({elapsed:.1f} s)")
    assert ok


def test_4_similarity_invariance(approx_eigs, acceptance_report):
    sym_vals, unsym_vals, elapsed = approx_eigs
    err = similarity_error(sym_vals, unsym_vals)
    ok = err < 1e-8
    acceptance_report(4, "similarity invariance", ok, f"rel error {err:.2e} < 1e-8 ({elapsed:.1f} s)")
    assert ok


def test_5_slepian_counting(reference_config, acceptance_report):
    spec_u, spec_s = axis_spectra(reference_config)
    count_u, count_s = spec_u.count_above(0.5), spec_s.count_above(0.5)
    ok = abs(count_u - 40) <= 1 and abs(count_s - 3) <= 1
    acceptance_report(5, "Slepian counting", ok, f"u-axis {count_u} (40 +- 1), s-axis {count_s} (3 +- 1)")
    assert ok


def test_6_critical_index_agreement(reference_config, operator_spectra, approx_eigs, acceptance_report):
    spectra, elapsed = operator_spectra
    tau = reference_config.tau_db
    _, unsym_vals, _ = approx_eigs
    approx_values = np.sqrt(unsym_vals)
    indices = {
        "AA^dagger": spectra["lifting"].critical_index,
        "AA_w^dagger": spectra["weighted"].critical_index,
        "approximation": detect_critical_index(approx_values, tau),
    }
    lo, hi = CRITICAL_BAND
    in_band = all(lo <= i <= hi for i in indices.values())
    gap = abs(indices["AA^dagger"] - indices["AA_w^dagger"])
    ok = in_band and gap <= MAX_WEIGHTED_GAP
    detail = ", ".join(f"{k}={v}" for k, v in indices.items())
    acceptance_report(
        6, "critical-index agreement", ok,
        f"{detail} at {tau:g} dB; band [{lo}, {hi}], weighted gap {gap} <= {MAX_WEIGHTED_GAP} ({elapsed:.0f} s)",
    )
    assert in_band, f"critical indices outside [{lo}, {hi}]: {indices}"
    assert gap <= MAX_WEIGHTED_GAP


def rectangle_quadrature(r, r_o, u, u_o, cfg, n=400):
    a, beta, r_max = cfg.a, cfg.beta, cfg.r_max
    t, w = np.polynomial.legendre.leggauss(n)
    x1, w1 = 2 * a * t, 2 * a * w
    x2, w2 = a**2 / r_max * t, a**2 / r_max * w
    integral = (w1 @ np.exp(-1j * beta * (u_o - u) * x1)) * (
        w2 @ np.exp(1j * beta / 2 * (r_max / r_o - r_max / r) * x2)
    )
    return (integral / (beta**2 * r * r_o)).real


def test_7_kernel_closed_form(reference_config, acceptance_report):
    cfg = reference_config
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        r, r_o = rng.uniform(cfg.r_min, cfg.r_max, 2)
        u, u_o = rng.uniform(-cfg.u_max, cfg.u_max, 2)
        oracle = rectangle_quadrature(r, r_o, u, u_o, cfg)
        worst = max(worst, abs(approx_kernel_H(r, r_o, u, u_o, cfg) - oracle) / abs(oracle))
    ok = worst < 1e-8
    acceptance_report(7, "kernel closed form", ok, f"max rel error {worst:.2e} < 1e-8 over 10 tuples")
    assert ok


def test_8_property_suite(capsys, acceptance_report):
    code = main(["verify"])
    out = capsys.readouterr().out
    lines = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    ok = code == 0 and len(lines) == 5 and all(line.startswith("PASS") for line in lines)
    acceptance_report(8, "property suite", ok, f"exit {code}; " + "; ".join(l.split(":")[0] for l in lines))
    assert ok, out
