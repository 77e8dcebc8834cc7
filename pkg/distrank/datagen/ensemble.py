from typing import Optional, Tuple

import numpy as np

from ..exceptions import InvalidParameterError


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed n x n orthogonal matrix: QR of a Gaussian with sign-fixed R diagonal"""
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def haar_frame(n: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """n x r matrix with orthonormal columns, the first r columns of a Haar matrix"""
    return haar_orthogonal(n, rng)[:, :r]


def orthogonal_ensemble_pair(n: int, r: int, seed: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Two independent r x n matrices with orthonormal rows, for r <= n/4"""
    if r < 1 or 4 * r > n:
        raise InvalidParameterError(f"need 1 <= r <= n/4, got r={r}, n={n}")
    rng = np.random.default_rng(seed)
    Q1 = haar_orthogonal(n, rng)[:r, :]
    Q2 = haar_orthogonal(n, rng)[:r, :]
    return Q1, Q2
