"""Run descriptors and experiment configs: JSON documents validated with pydantic"""

from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

from ..datagen.spiked import SpikedCovConfig
from .settings import get_settings


class QuantizationConfig(BaseModel):
    mode: Literal["exact", "fixed"] = "exact"
    tau: Optional[float] = Field(None, gt=0.0, description="Grid step; None picks the default for the run")
    range_bound: Optional[float] = Field(None, gt=0.0, description="Declared R; None derives it from the filter")
    dynamic_range: bool = Field(False, description="Per-message R instead of a declared one")


class RunDescriptor(BaseModel):
    """One protocol run as read from --config"""

    protocol: Literal["randomized", "deterministic", "baseline"] = "randomized"
    n: int = Field(200, ge=1)
    m: int = Field(2, ge=1)
    r: int = Field(20, ge=1, description="Rank cap parameter or planted rank")
    c1: float = Field(0.5, gt=0.0, le=1.0)
    c2: float = Field(0.1, ge=0.0, lt=1.0)
    p: Optional[int] = Field(None, ge=0, description="None uses ceil(log2(2n))")
    T: int = Field(default_factory=lambda: get_settings().default_T, ge=1)
    seed: int = Field(default_factory=lambda: get_settings().default_seed, ge=0)
    degree: Optional[int] = Field(None, ge=1, description="Baseline filter degree")
    q1_degree: Optional[int] = Field(None, ge=1)
    scheme: Literal["horner", "powers"] = "horner"
    quantization: QuantizationConfig = Field(default_factory=QuantizationConfig)
    shards: List[Path] = Field(default_factory=list, description="Shard files, or one shard-set directory")
    instance: Literal["spiked", "planted"] = Field("planted", description="Generated when no shards are given")
    samples_per_machine: int = Field(1000, ge=1)
    lam: float = Field(0.4, gt=0.0)
    sigma2: float = Field(0.1, ge=0.0)
    signal: float = Field(0.6, ge=0.0, le=1.0, description="Planted eigenvalue of the top r directions")
    floor: float = Field(0.0, ge=0.0, le=1.0, description="Planted eigenvalue of the rest")
    split: Literal["even", "random"] = "even"

    @model_validator(mode="after")
    def check_thresholds(self) -> "RunDescriptor":
        if not self.c2 < self.c1:
            raise ValueError(f"need c2 < c1, got c1={self.c1}, c2={self.c2}")
        return self


class ShardFiles(BaseModel):
    paths: List[Path] = Field(..., min_length=1)


class ExperimentConfig(BaseModel):
    """Sweep over T, p and filter kind with repeated trials"""

    T_values: List[int] = Field(default_factory=lambda: list(range(1, 31)), min_length=1)
    p_values: List[int] = Field(default_factory=lambda: [0, 1, 5])
    include_baseline: bool = True
    baseline_degree: Optional[int] = Field(None, ge=1, description="None matches q1_degree * (2 max(p) + 1)")
    q1_degree: int = Field(4, ge=1)
    c1: float = Field(0.5, gt=0.0, le=1.0)
    c2: float = Field(0.1, ge=0.0, lt=1.0)
    trials: int = Field(100, ge=1)
    master_seed: int = Field(0, ge=0)
    instance: Union[SpikedCovConfig, ShardFiles]
    quantization: QuantizationConfig = Field(default_factory=QuantizationConfig)
    scheme: Literal["horner", "powers"] = "horner"
    filter_path: Optional[Path] = Field(None, description="Saved composite filter reused for every composite point")
    output_dir: Path = Path("results")

    @model_validator(mode="after")
    def check_sweep(self) -> "ExperimentConfig":
        if not self.p_values and not self.include_baseline:
            raise ValueError("experiment needs at least one sweep point")
        if any(T < 1 for T in self.T_values):
            raise ValueError("every T must be >= 1")
        if any(p < 0 for p in self.p_values):
            raise ValueError("every p must be >= 0")
        if not self.c2 < self.c1:
            raise ValueError(f"need c2 < c1, got c1={self.c1}, c2={self.c2}")
        return self

    @property
    def T_max(self) -> int:
        return max(self.T_values)

    def resolved_baseline_degree(self) -> int:
        if self.baseline_degree is not None:
            return self.baseline_degree
        return self.q1_degree * (2 * max(self.p_values, default=0) + 1)
