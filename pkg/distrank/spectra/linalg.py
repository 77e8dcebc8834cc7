"""Dense symmetric linear algebra and the exact generalized-rank oracle.

Everything here is a pure function of immutable inputs. Eigenvalues are
always reported in descending order, sigma_1 >= ... >= sigma_n.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import get_lapack_funcs

from ..exceptions import (
    DimensionMismatchError,
    EigenSolverError,
    InvalidParameterError,
    NotPsdError,
    RankCapExceededError,
)

ZERO_THRESHOLD_TOL = 1e-10
DEFAULT_FACTOR_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense n x n symmetric real matrix, symmetrized exactly on construction"""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InvalidParameterError("matrix dimension must be >= 1")
        if not np.all(np.isfinite(a)):
            raise InvalidParameterError("matrix has non-finite entries")
        sym = (a + a.T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "SymMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n))

    @classmethod
    def diag(cls, values) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        if other.n != self.n:
            raise DimensionMismatchError(f"cannot add {self.n}x{self.n} and {other.n}x{other.n}")
        return SymMatrix(self.entries + other.entries)

    def scaled(self, factor: float) -> "SymMatrix":
        return SymMatrix(self.entries * factor)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Full spectral decomposition with descending eigenvalues"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


def as_sym(A: Union[SymMatrix, np.ndarray]) -> SymMatrix:
    return A if isinstance(A, SymMatrix) else SymMatrix(A)


def eigh(A: Union[SymMatrix, np.ndarray]) -> EigenDecomposition:
    """Dense divide-and-conquer solve (LAPACK syevd) of a symmetric matrix"""
    A = as_sym(A)
    syevd, = get_lapack_funcs(("syevd",), (A.entries,))
    w, v, info = syevd(A.entries, compute_v=1, lower=1)
    if info > 0:
        raise EigenSolverError(int(info))
    if info < 0:
        raise InvalidParameterError(f"syevd rejected argument {-info}")
    return EigenDecomposition(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def eigvalsh(A: Union[SymMatrix, np.ndarray]) -> np.ndarray:
    """Descending eigenvalues only"""
    return eigh(A).eigenvalues


def generalized_rank(A: Union[SymMatrix, np.ndarray], c: float) -> int:
    """Number of eigenvalues strictly greater than c.

    At c = 0 an absolute tolerance of 1e-10 absorbs eigensolver noise, so the
    result is the numerical rank.
    """
    return generalized_rank_from_spectrum(eigvalsh(A), c)


def generalized_rank_from_spectrum(sigma: np.ndarray, c: float) -> int:
    """generalized_rank for an already computed spectrum"""
    if c < 0:
        raise InvalidParameterError(f"threshold must be >= 0, got {c}")
    cut = ZERO_THRESHOLD_TOL if c == 0 else c
    return int(np.count_nonzero(np.asarray(sigma) > cut))


def matvec(A: Union[SymMatrix, np.ndarray], v: np.ndarray, ordered: bool = False) -> np.ndarray:
    """Dense product A v.

    With ordered=True every output entry is accumulated left to right over the
    columns, which reproduces a naive double loop bit for bit.
    """
    a = A.entries if isinstance(A, SymMatrix) else np.asarray(A, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"vector length {v.shape[0]} does not match n={a.shape[1]}")
    if not ordered:
        return a @ v
    out = np.zeros(a.shape[0], dtype=np.float64)
    for j in range(a.shape[1]):
        out += a[:, j] * v[j]
    return out


def psd_sqrt_factor(
    A: Union[SymMatrix, np.ndarray],
    rank_cap: int,
    tol: float = DEFAULT_FACTOR_TOL,
) -> np.ndarray:
    """Factor a PSD matrix as B B^T with at most rank_cap columns u_i * sqrt(sigma_i)"""
    if rank_cap < 0:
        raise InvalidParameterError("rank_cap must be >= 0")
    dec = eigh(A)
    sigma = dec.eigenvalues
    if sigma[-1] < -tol:
        raise NotPsdError(f"smallest eigenvalue {sigma[-1]:.3e} below -{tol:g}")
    keep = sigma > tol
    found = int(np.count_nonzero(keep))
    if found > rank_cap:
        raise RankCapExceededError(found, rank_cap)
    return dec.eigenvectors[:, keep] * np.sqrt(sigma[keep])
