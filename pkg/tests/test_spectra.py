import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lifted_spectrum import (
    ComplexOperatorMatrix,
    NumericalError,
    SpectrumResult,
    detect_critical_index,
    eig_spectrum,
    gram_operator,
    svd_spectrum,
)
from lifted_spectrum.analysis import gram_consistency_error, lifting_operator
from lifted_spectrum.grids import Grid1D


def unit_grid(n):
    return Grid1D(np.arange(n) + 0.5, np.ones(n), (0.0, float(n)))


def matrix_op(entries):
    entries = np.asarray(entries, dtype=complex)
    return ComplexOperatorMatrix(entries, unit_grid(entries.shape[0]), unit_grid(entries.shape[1]))


@pytest.mark.parametrize(
    "values, tau, expected",
    [([1, 0.5, 1e-6], -40, 2), ([1, 1, 1], -40, 3), ([1, 1e-1, 1e-2, 1e-3], -45, 3)],
)
def test_detect_critical_index(values, tau, expected):
    assert detect_critical_index(values, tau) == expected


def test_detect_rejects_degenerate_input():
    with pytest.raises(ValueError):
        detect_critical_index([], -40)
    with pytest.raises(ValueError):
        detect_critical_index([0.0, 0.0], -40)


@given(
    values=st.lists(st.floats(0, 1), min_size=1, max_size=40),
    tau_hi=st.floats(-200, -0.01),
    drop=st.floats(0, 100),
)
def test_detect_monotone_in_threshold(values, tau_hi, drop):
    values = np.sort(np.array([1.0] + values))[::-1]
    assert detect_critical_index(values, tau_hi - drop) >= detect_critical_index(values, tau_hi)


def test_svd_of_zero_matrix():
    result = svd_spectrum(matrix_op(np.zeros((3, 4))))
    assert np.all(result.values == 0)
    assert result.critical_index == 1


def test_svd_of_diagonal():
    result = svd_spectrum(matrix_op(np.diag([3.0, 4.0])))
    np.testing.assert_allclose(result.values, [4.0, 3.0])
    assert result.kind == "svd_A"


def test_eig_identity_and_diagonal():
    np.testing.assert_allclose(eig_spectrum(matrix_op(np.eye(3)), hermitian=True).values, [1, 1, 1])
    np.testing.assert_allclose(eig_spectrum(matrix_op(np.diag([4.0, 1.0])), hermitian=True).values, [2, 1])
    np.testing.assert_allclose(eig_spectrum(matrix_op(np.diag([1.0, 4.0])), hermitian=False).values, [2, 1])


def test_eig_rejects_non_square():
    with pytest.raises(ValueError):
        eig_spectrum(matrix_op(np.ones((2, 3))), hermitian=True)


def test_eig_rejects_indefinite_hermitian():
    with pytest.raises(NumericalError):
        eig_spectrum(matrix_op(np.diag([1.0, -0.5])), hermitian=True)


def test_eig_rejects_non_hermitian_in_hermitian_mode():
    with pytest.raises(NumericalError):
        eig_spectrum(matrix_op([[1.0, 2.0], [0.0, 1.0]]), hermitian=True)


def test_eig_clamps_roundoff_negatives():
    result = eig_spectrum(matrix_op(np.diag([1.0, -1e-14])), hermitian=True)
    np.testing.assert_array_equal(result.values, [1.0, 0.0])


def test_complex_eigenvalues_flagged():
    rotation = [[2.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]
    result = eig_spectrum(matrix_op(rotation), hermitian=False)
    np.testing.assert_allclose(result.values, [np.sqrt(2), 1, 1])
    assert result.complex_eig_flags == (1, 2)


def test_weighted_hermitian_mode_uses_quadrature_similarity():
    # K diag(w) with symmetric K is self-adjoint in the w-weighted inner product
    w = np.array([0.5, 2.0, 1.0])
    K = np.array([[2.0, 0.3, 0.1], [0.3, 1.0, 0.2], [0.1, 0.2, 0.5]])
    grid = Grid1D(np.array([0.5, 1.5, 2.5]), w, (0.0, 3.0))
    op = ComplexOperatorMatrix(K * w[None, :], grid, grid)
    expected = np.sqrt(np.sort(np.linalg.eigvals(K * w[None, :]).real)[::-1])
    np.testing.assert_allclose(eig_spectrum(op, hermitian=True).values, expected, rtol=1e-12)


def test_spectrum_result_validation():
    with pytest.raises(ValueError):
        SpectrumResult(np.array([1.0, 2.0]), "svd_A", 1, -40.0)
    with pytest.raises(ValueError):
        SpectrumResult(np.array([1.0, -0.1]), "svd_A", 1, -40.0)
    with pytest.raises(ValueError):
        SpectrumResult(np.array([1.0]), "nonsense", 1, -40.0)


@pytest.fixture(scope="module")
def reduced_reference_config(reference_config):
    # reference geometry, data grid still larger than 200 values, dense SVD in seconds
    return dataclasses.replace(reference_config, n_x=61, n_u=82, n_s=16)


def test_svd_matches_gram_eigenvalues_top_200(reduced_reference_config):
    cfg = reduced_reference_config
    A = lifting_operator(cfg)
    sv = svd_spectrum(A, config=cfg).values[:200]
    ev = eig_spectrum(gram_operator(A, False, cfg), hermitian=True, config=cfg).values[:200]
    assert np.max(np.abs(sv - ev) / sv) < 1e-8


def test_gram_consistency_floor(reduced_reference_config):
    assert gram_consistency_error(reduced_reference_config) < 1e-8


@pytest.mark.slow
@pytest.mark.fullsvd
def test_svd_matches_gram_eigenvalues_full_grid(reference_config):
    A = lifting_operator(reference_config)
    ev = eig_spectrum(gram_operator(A, False, reference_config), hermitian=True, config=reference_config).values[:200]
    sv = svd_spectrum(A, config=reference_config).values[:200]
    assert np.max(np.abs(sv - ev) / sv) < 1e-8
