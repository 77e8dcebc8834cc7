from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from ..exceptions import InvalidParameterError
from ..utils.bit_counter import floor_power_of_two, next_power_of_two

QuantizationMode = Literal["exact", "fixed"]


@dataclass(frozen=True)
class QuantizationSpec:
    """How posted scalars are encoded.

    In fixed mode every posted scalar is an integer multiple of tau. With a
    declared range_bound R the per-entry cost is constant; without one R is
    taken per message as max|v_i| rounded up to a power of two.
    """

    mode: QuantizationMode = "exact"
    tau: float = 0.0
    range_bound: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ("exact", "fixed"):
            raise InvalidParameterError(f"unknown quantization mode {self.mode!r}")
        if self.mode == "fixed" and not self.tau > 0.0:
            raise InvalidParameterError("fixed-point quantization needs tau > 0")
        if self.range_bound is not None:
            if self.range_bound <= 0.0:
                raise InvalidParameterError("range_bound must be positive")
            object.__setattr__(self, "range_bound", next_power_of_two(self.range_bound))

    @property
    def is_fixed(self) -> bool:
        return self.mode == "fixed"

    @classmethod
    def exact(cls) -> "QuantizationSpec":
        return cls("exact")

    @classmethod
    def fixed(cls, tau: float, range_bound: Optional[float] = None) -> "QuantizationSpec":
        return cls("fixed", tau, range_bound)

    def with_range(self, range_bound: float) -> "QuantizationSpec":
        return QuantizationSpec(self.mode, self.tau, range_bound)


def default_tau(m: int, d: int, n: int, p: int) -> float:
    """1 / (m d n 2^(4p)) rounded down to a power of two"""
    return floor_power_of_two(1.0 / (max(m, 1) * max(d, 1) * n * 2.0 ** (4 * p)))


def quantize(v: np.ndarray, tau: float) -> np.ndarray:
    """Round to the nearest multiple of tau, ties to even"""
    return np.round(np.asarray(v, dtype=np.float64) / tau) * tau


def message_range(v: np.ndarray) -> float:
    return next_power_of_two(float(np.max(np.abs(v))) if np.size(v) else 0.0)


def grid_quantize_unit(x: np.ndarray, bits: int) -> np.ndarray:
    """Nearest point of the uniform 2^bits-level grid on [-1, 1]"""
    step = 2.0 / (2 ** bits - 1)
    clipped = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
    return np.round((clipped + 1.0) / step) * step - 1.0
