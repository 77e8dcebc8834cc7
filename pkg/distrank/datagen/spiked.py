"""Spiked-covariance instances.

Samples are x = a + e with a ~ N(0, lam U U^T) for a Haar frame U of rank r
and e ~ N(0, sigma2 I). Machine i holds X_i^T X_i / N where N is the sample
count over all machines, so the population matrix has r eigenvalues at
lam + sigma2 and the rest at sigma2.
"""

from typing import List, Literal, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from ..blackboard import PsdShard
from ..spectra import SymMatrix, eigvalsh
from .ensemble import haar_frame

logger = structlog.get_logger()


class SpikedCovConfig(BaseModel):
    n: int = Field(..., ge=1, description="Dimension")
    m: int = Field(..., ge=1, description="Number of machines")
    samples_per_machine: int = Field(..., ge=1)
    r: int = Field(..., ge=0, description="Planted rank")
    lam: float = Field(0.4, gt=0.0, description="Spike scale")
    sigma2: float = Field(0.1, ge=0.0, description="Noise variance")
    seed: int = Field(0, ge=0)
    normalize: Literal["none", "clip"] = "clip"

    @model_validator(mode="after")
    def check_rank(self) -> "SpikedCovConfig":
        if self.r > self.n:
            raise ValueError(f"r={self.r} exceeds n={self.n}")
        return self


def spiked_covariance_shards(cfg: SpikedCovConfig) -> Tuple[List[PsdShard], int]:
    """Shards plus the planted rank"""
    rng = np.random.default_rng(cfg.seed)
    U = haar_frame(cfg.n, cfg.r, rng)
    total = cfg.m * cfg.samples_per_machine

    covariances = []
    for _ in range(cfg.m):
        Z = rng.standard_normal((cfg.samples_per_machine, cfg.r))
        E = rng.standard_normal((cfg.samples_per_machine, cfg.n))
        X = np.sqrt(cfg.lam) * (Z @ U.T) + np.sqrt(cfg.sigma2) * E
        covariances.append(X.T @ X / total)

    scale = 1.0
    if cfg.normalize == "clip":
        top = float(eigvalsh(sum(covariances))[0])
        if top > 1.0:
            scale = 1.0 / top
            logger.info("spiked_instance_rescaled", top_eigenvalue=top, n=cfg.n, seed=cfg.seed)

    shards = [PsdShard(i + 1, SymMatrix(C * scale)) for i, C in enumerate(covariances)]
    return shards, cfg.r
