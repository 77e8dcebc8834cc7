"""Empirical check that two orthogonal-ensemble projectors keep many eigenvalues above 1/10"""

import math
from typing import List

import numpy as np
from pydantic import BaseModel

from ..datagen import orthogonal_ensemble_pair
from ..spectra import eigvalsh
from .seeds import hash64

LOWER_BOUND = 0.1


class EnsembleCheckReport(BaseModel):
    n: int
    r: int
    index: int
    trials: int
    passed: int
    min_eigenvalue: float
    eigenvalues: List[float]


def ensemble_rank_check(n: int, r: int, trials: int = 100, master_seed: int = 0) -> EnsembleCheckReport:
    """Count pairs with sigma_k(Q1^T Q1 + Q2^T Q2) > 1/10 for k = ceil(6r/5)"""
    k = math.ceil(6 * r / 5)
    values = []
    for t in range(trials):
        Q1, Q2 = orthogonal_ensemble_pair(n, r, seed=hash64(master_seed, t))
        sigma = eigvalsh(Q1.T @ Q1 + Q2.T @ Q2)
        values.append(float(sigma[k - 1]))
    values_arr = np.array(values)
    return EnsembleCheckReport(
        n=n,
        r=r,
        index=k,
        trials=trials,
        passed=int(np.count_nonzero(values_arr > LOWER_BOUND)),
        min_eigenvalue=float(values_arr.min()),
        eigenvalues=values,
    )
