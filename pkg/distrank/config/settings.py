from functools import lru_cache
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class DistRankSettings(BaseSettings):
    """Library defaults, overridable through DISTRANK_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="DISTRANK_", env_file=".env", extra="ignore")

    log_level: str = "INFO"

    default_T: int = Field(32, ge=1)
    default_seed: int = Field(0, ge=0)

    # None selects the minimal-degree search; experiment sweeps fix 4
    q1_degree: Optional[int] = Field(None, ge=1)
    q1_target_error: float = Field(0.1, gt=0.0, lt=0.5)
    q1_max_degree: int = Field(200, ge=1)
    sup_grid_points: int = Field(10_001, ge=2)

    eigen_tolerance: float = Field(1e-10, gt=0.0)
    spectrum_power_iterations: int = Field(50, ge=1)
    spectrum_tolerance: float = Field(1e-6, ge=0.0)
    shard_psd_tolerance: float = Field(1e-9, ge=0.0)

    max_concurrency: int = Field(8, ge=1)
    probe_scheme: Literal["horner", "powers"] = "horner"


@lru_cache(maxsize=1)
def get_settings() -> DistRankSettings:
    return DistRankSettings()
