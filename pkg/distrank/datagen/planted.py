from typing import List, Literal, Sequence

import numpy as np

from ..blackboard import PsdShard
from ..exceptions import InvalidParameterError
from ..spectra import SymMatrix
from .ensemble import haar_orthogonal

SplitMode = Literal["even", "random"]


def planted_spectrum_shards(
    n: int,
    m: int,
    eigenvalues: Sequence[float],
    seed: int,
    split: SplitMode = "even",
) -> List[PsdShard]:
    """Shards of A = V diag(eigenvalues) V^T with Haar V.

    "even" gives every machine A/m. "random" draws Dirichlet weights w_k per
    eigenvalue and hands machine i the matrix V diag(w_{k,i} lambda_k) V^T, so
    every shard is PSD and the shards sum to A.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if lam.shape != (n,):
        raise InvalidParameterError(f"need {n} eigenvalues, got {lam.shape[0] if lam.ndim else 0}")
    if np.any(lam < 0.0) or np.any(lam > 1.0):
        raise InvalidParameterError("eigenvalues must lie in [0, 1]")
    if m < 1:
        raise InvalidParameterError("m must be >= 1")

    rng = np.random.default_rng(seed)
    V = haar_orthogonal(n, rng)

    if split == "even":
        A = (V * (lam / m)) @ V.T
        return [PsdShard(i, SymMatrix(A)) for i in range(1, m + 1)]
    if split == "random":
        weights = rng.dirichlet(np.ones(m), size=n)
        return [PsdShard(i, SymMatrix((V * (lam * weights[:, i - 1])) @ V.T)) for i in range(1, m + 1)]
    raise InvalidParameterError(f"unknown split mode {split!r}")


def step_spectrum(n: int, k: int, high: float = 1.0, low: float = 0.0) -> np.ndarray:
    """k eigenvalues at high, the rest at low"""
    if not 0 <= k <= n:
        raise InvalidParameterError(f"need 0 <= k <= n, got k={k}")
    lam = np.full(n, low)
    lam[:k] = high
    return lam
