import numpy as np

from distrank.blackboard import PsdShard, build_machines
from distrank.spectra import SymMatrix


def random_psd(n: int, seed: int, rank: int = None, top: float = 1.0) -> np.ndarray:
    """PSD matrix with spectrum uniform in [0, top] (or exactly `rank` nonzero eigenvalues)"""
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = rng.uniform(0.0, top, n)
    if rank is not None:
        lam[rank:] = 0.0
    return (Q * lam) @ Q.T


def split_even(A: np.ndarray, m: int):
    return [PsdShard(i, SymMatrix(A / m)) for i in range(1, m + 1)]


def split_random(A: np.ndarray, m: int, seed: int):
    """Random PSD split of A via Dirichlet weights per eigenvalue"""
    rng = np.random.default_rng(seed)
    lam, V = np.linalg.eigh(A)
    lam = np.clip(lam, 0.0, None)
    w = rng.dirichlet(np.ones(m), size=lam.size)
    return [PsdShard(i, SymMatrix((V * (lam * w[:, i - 1])) @ V.T)) for i in range(1, m + 1)]


def machines_for(A: np.ndarray, m: int = 2):
    return build_machines(split_even(A, m), validate=False)


def jacobi_eigenvalues(A: np.ndarray, sweeps: int = 100, tol: float = 1e-14) -> np.ndarray:
    """Cyclic Jacobi rotations, independent of LAPACK; descending eigenvalues"""
    a = np.array(A, dtype=np.float64)
    n = a.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(a ** 2) - np.sum(np.diag(a) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta ** 2 + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t ** 2 + 1.0)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                a = J.T @ a @ J
    return np.sort(np.diag(a))[::-1]


