import math
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class EstimateReport(BaseModel):
    """Output of the randomized estimator: rhat is the mean of ||y_t||^2"""

    rhat: float
    rhat_rounded: int
    T: int = Field(..., ge=1)
    y_sq_norms: List[float]
    bits_used: int
    bits_per_repetition: List[int]
    answer_bits: int
    rounds: int
    seed: int
    n: int
    m: int
    delta: float
    scheme: str
    quantization: Dict[str, Any]
    bits_per_entry: Optional[int] = None
    filter_summary: Dict[str, Any]

    def rhat_for(self, T: int) -> float:
        """Estimate from the first T repetitions"""
        return sum(self.y_sq_norms[:T]) / T

    def bits_for(self, T: int) -> int:
        return sum(self.bits_per_repetition[:T]) + self.answer_bits


class DetProtocolReport(BaseModel):
    """Output of the quantized-factorization protocol"""

    rhat: int
    bits_used: int
    bits_per_entry: int
    threshold_used: float
    columns: Dict[int, int]
    n: int
    m: int
    r: int


def round_estimate(rhat: float, n: int) -> int:
    """Nearest integer to rhat, clamped to [0, n]"""
    return int(min(max(math.floor(rhat + 0.5), 0), n))


def resolve_delta(delta: float, oracle_rank: Optional[int], rhat_rounded: int) -> float:
    if delta > 0.0:
        return delta
    if oracle_rank:
        return 1.0 / math.sqrt(oracle_rank)
    return 1.0 / math.sqrt(max(rhat_rounded, 1))


def containment_bounds(rank_c1: int, rank_c2: int, delta: float) -> Tuple[float, float]:
    """(1 - delta) rank(A, c1) - 1 <= rhat <= (1 + delta)(rank(A, c2) + 1)"""
    return (1.0 - delta) * rank_c1 - 1.0, (1.0 + delta) * (rank_c2 + 1)


def containment_failure_probability(T: int, delta: float, rank_c1: int) -> float:
    return min(1.0, 2.0 * math.exp(-T * delta ** 2 * rank_c1 / 32.0))
