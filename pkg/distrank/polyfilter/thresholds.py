from dataclasses import dataclass
from typing import Union

import numpy as np

from ..exceptions import InvalidParameterError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Thresholds:
    """Threshold pair (c1, c2) and relative tolerance delta of the rank target"""

    c1: float
    c2: float
    delta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.c2 < self.c1 <= 1.0):
            raise InvalidParameterError(f"need 0 <= c2 < c1 <= 1, got c1={self.c1}, c2={self.c2}")
        if not (0.0 <= self.delta < 1.0):
            raise InvalidParameterError(f"need 0 <= delta < 1, got {self.delta}")

    @property
    def midpoint(self) -> float:
        return (self.c1 + self.c2) / 2.0

    @property
    def gap(self) -> float:
        return self.c1 - self.c2


def hspec(x: ArrayLike, th: Thresholds) -> ArrayLike:
    """Piecewise linear step surrogate: 0 below c2, 1 above c1, linear between"""
    x = np.asarray(x, dtype=np.float64)
    out = np.clip((x - th.c2) / (th.c1 - th.c2), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def unit_grid(points: int, th: Thresholds = None) -> np.ndarray:
    """Uniform grid on [0, 1], with the breakpoints added when thresholds are given"""
    grid = np.linspace(0.0, 1.0, points)
    if th is not None:
        grid = np.union1d(grid, [th.c2, th.c1])
    return grid


def passband_grid(points: int, th: Thresholds) -> np.ndarray:
    """Points of the uniform grid lying in [0, c2] or [c1, 1], plus both breakpoints"""
    grid = unit_grid(points, th)
    return grid[(grid <= th.c2) | (grid >= th.c1)]
