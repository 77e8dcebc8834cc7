import numpy as np
import pytest

from distrank.exceptions import (
    DimensionMismatchError,
    EigenSolverError,
    InvalidParameterError,
    MatrixFormatError,
    NotPsdError,
    RankCapExceededError,
)
from distrank.spectra import (
    SymMatrix,
    decode_matrix,
    eigh,
    eigvalsh,
    encode_matrix,
    generalized_rank,
    generalized_rank_from_spectrum,
    matvec,
    psd_sqrt_factor,
    read_matrix,
    write_matrix,
)
from distrank.spectra import linalg
from distrank.spectra.matrix_io import format_text_matrix

from .helpers import jacobi_eigenvalues, random_psd


def test_symmatrix_is_exactly_symmetric():
    rng = np.random.default_rng(0)
    A = SymMatrix(rng.standard_normal((5, 5)))
    assert np.array_equal(A.entries, A.entries.T)


def test_symmatrix_rejects_non_square():
    with pytest.raises(DimensionMismatchError):
        SymMatrix(np.zeros((2, 3)))


def test_eigh_trivial_cases():
    np.testing.assert_allclose(eigvalsh(SymMatrix.identity(3)), [1.0, 1.0, 1.0])
    np.testing.assert_allclose(eigvalsh(SymMatrix.diag([0.3, 0.9, 0.1])), [0.9, 0.3, 0.1], atol=1e-15)


def test_eigh_matches_jacobi_oracle():
    A = random_psd(8, seed=7)
    np.testing.assert_allclose(eigvalsh(A), jacobi_eigenvalues(A), atol=1e-8)


def test_eigh_reconstructs_descending():
    A = random_psd(30, seed=2)
    dec = eigh(A)
    assert np.all(np.diff(dec.eigenvalues) <= 0.0)
    assert np.max(np.abs(dec.reconstruct() - A)) <= 1e-10 * 30


def test_generalized_rank():
    A = SymMatrix.diag([1.0, 0.6, 0.3, 0.05])
    assert generalized_rank(A, 0.5) == 2
    assert generalized_rank(A, 1.0) == 0
    assert generalized_rank(random_psd(20, seed=4, rank=6), 0.0) == 6


def test_generalized_rank_monotone_in_threshold():
    for seed in range(10):
        A = random_psd(15, seed)
        assert generalized_rank(A, 0.6) <= generalized_rank(A, 0.2)


def test_matvec_ordered_matches_naive_loop_bitwise():
    rng = np.random.default_rng(3)
    A = SymMatrix(rng.standard_normal((12, 12)))
    v = rng.standard_normal(12)
    naive = np.zeros(12)
    for j in range(12):
        for i in range(12):
            naive[i] += A.entries[i, j] * v[j]
    assert np.array_equal(matvec(A, v, ordered=True), naive)
    np.testing.assert_allclose(matvec(A, v), naive, rtol=1e-13, atol=1e-13)


def test_matvec_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        matvec(SymMatrix.identity(3), np.ones(4))


def test_psd_sqrt_factor_rank_one():
    u = np.array([0.6, 0.8, 0.0])
    B = psd_sqrt_factor(np.outer(u, u), rank_cap=1)
    assert B.shape == (3, 1)
    np.testing.assert_allclose(B @ B.T, np.outer(u, u), atol=1e-12)


def test_psd_sqrt_factor_zero_and_low_rank():
    assert psd_sqrt_factor(np.zeros((4, 4)), rank_cap=0).shape == (4, 0)
    A = random_psd(20, seed=11, rank=5)
    B = psd_sqrt_factor(A, rank_cap=5)
    assert np.linalg.norm(B @ B.T - A) <= 1e-9
    again = psd_sqrt_factor(B @ B.T, rank_cap=5)
    assert np.linalg.norm(again @ again.T - B @ B.T) <= 1e-9


def test_psd_sqrt_factor_errors():
    with pytest.raises(RankCapExceededError):
        psd_sqrt_factor(random_psd(10, seed=1, rank=4), rank_cap=3)
    with pytest.raises(NotPsdError):
        psd_sqrt_factor(np.diag([1.0, -0.5]), rank_cap=2)


def test_binary_and_text_files(tmp_path):
    A = SymMatrix(random_psd(6, seed=5))
    binary = write_matrix(tmp_path / "a.grnk", A)
    text = write_matrix(tmp_path / "a.txt", A, fmt="text")
    assert binary.read_bytes()[:4] == b"GRNK"
    assert np.array_equal(read_matrix(binary).entries, A.entries)
    assert np.array_equal(read_matrix(text).entries, A.entries)
    assert format_text_matrix(A).splitlines()[0] == "6"


def test_bad_matrix_files():
    data = encode_matrix(SymMatrix.identity(2))
    with pytest.raises(MatrixFormatError):
        decode_matrix(b"XXXX" + data[4:])
    with pytest.raises(MatrixFormatError):
        decode_matrix(data[:-8])


def test_generalized_rank_from_spectrum_matches_matrix_form():
    A = random_psd(10, seed=3)
    sigma = eigvalsh(A)
    for c in (0.0, 0.05, 0.2, 0.5):
        assert generalized_rank_from_spectrum(sigma, c) == generalized_rank(A, c)
    assert generalized_rank_from_spectrum(np.array([1.0, 1e-12, 0.0]), 0.0) == 1
    with pytest.raises(InvalidParameterError):
        generalized_rank_from_spectrum(sigma, -0.1)


def test_eigensolver_failure_reports_unconverged_count(monkeypatch):
    def failing_syevd(a, compute_v=1, lower=1):
        return np.zeros(a.shape[0]), np.eye(a.shape[0]), 3

    monkeypatch.setattr(linalg, "get_lapack_funcs", lambda names, arrays: (failing_syevd,))
    with pytest.raises(EigenSolverError) as excinfo:
        eigh(np.eye(4))
    assert excinfo.value.unconverged == 3
    assert "3 off-diagonal elements" in str(excinfo.value)
