"""Chebyshev expansions on [0, 1].

An expansion stores a_0..a_d for q(x) = a_0/2 + sum_i a_i T_i(2x - 1); the
affine map to [-1, 1] never leaves this module.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev as npcheb
import structlog

from ..exceptions import DegreeExhaustedError, InvalidParameterError
from .thresholds import Thresholds, hspec, unit_grid, passband_grid

logger = structlog.get_logger()

DEFAULT_GRID_POINTS = 10_001


@dataclass(frozen=True, eq=False)
class ChebyshevExpansion:
    degree: int
    coeffs: np.ndarray
    achieved_sup_error: float = float("nan")
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.shape != (self.degree + 1,):
            raise InvalidParameterError(f"degree {self.degree} needs {self.degree + 1} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def series(self) -> np.ndarray:
        """Coefficients in numpy's convention (full weight on T_0)"""
        s = self.coeffs.copy()
        s[0] *= 0.5
        return s

    def __call__(self, x):
        """Clenshaw evaluation at x in [0, 1]"""
        s = 2.0 * np.asarray(x, dtype=np.float64) - 1.0
        out = npcheb.chebval(s, self.series)
        return float(out) if np.ndim(out) == 0 else out

    def shifted(self, offset: float) -> "ChebyshevExpansion":
        """Expansion of q(x) + offset"""
        coeffs = self.coeffs.copy()
        coeffs[0] += 2.0 * offset
        return ChebyshevExpansion(self.degree, coeffs, self.achieved_sup_error, dict(self.metadata))

    @classmethod
    def from_series(cls, series, achieved_sup_error: float = float("nan")) -> "ChebyshevExpansion":
        coeffs = np.array(series, dtype=np.float64)
        coeffs[0] *= 2.0
        return cls(len(coeffs) - 1, coeffs, achieved_sup_error)

    @classmethod
    def identity(cls) -> "ChebyshevExpansion":
        # x = (1 + s) / 2 = T_0/2 + T_1/2
        return cls(1, np.array([1.0, 0.5]))

    @classmethod
    def constant(cls, value: float) -> "ChebyshevExpansion":
        return cls(0, np.array([2.0 * value]))


def chebyshev_gauss_coefficients(func: Callable[[np.ndarray], np.ndarray], degree: int, nodes: Optional[int] = None) -> np.ndarray:
    """a_i = (2/N) sum_k func(x_k) cos(i theta_k) at the N Chebyshev-Gauss nodes"""
    nodes = nodes or 4 * (degree + 1)
    theta = math.pi * (np.arange(nodes) + 0.5) / nodes
    x = (np.cos(theta) + 1.0) / 2.0
    fx = np.asarray(func(x), dtype=np.float64)
    i = np.arange(degree + 1)[:, None]
    return (2.0 / nodes) * (np.cos(i * theta[None, :]) @ fx)


def contract_to_unit_range(coeffs: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Affinely squeeze q so that its values on the grid stay inside [0, 1]"""
    values = npcheb.chebval(2.0 * grid - 1.0, _series(coeffs))
    lo = min(float(values.min()), 0.0)
    hi = max(float(values.max()), 1.0)
    if lo == 0.0 and hi == 1.0:
        return coeffs
    out = coeffs / (hi - lo)
    out[0] = (coeffs[0] - 2.0 * lo) / (hi - lo)
    return out


def sup_error(q: Callable, target: Callable, grid: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(q(grid)) - np.asarray(target(grid)))))


def fit_chebyshev(
    func: Callable[[np.ndarray], np.ndarray],
    degree: int,
    grid: np.ndarray,
    contract: bool = True,
) -> ChebyshevExpansion:
    """Quadrature fit at fixed degree with its sup error measured on grid"""
    coeffs = chebyshev_gauss_coefficients(func, degree)
    if contract:
        coeffs = contract_to_unit_range(coeffs, grid)
    expansion = ChebyshevExpansion(degree, coeffs)
    err = sup_error(expansion, func, grid)
    return ChebyshevExpansion(degree, coeffs, err)


def fit_q1(
    th: Thresholds,
    target_err: float = 0.1,
    max_degree: int = 200,
    degree: Optional[int] = None,
    grid_points: int = DEFAULT_GRID_POINTS,
    contract: bool = True,
) -> ChebyshevExpansion:
    """Chebyshev fit of the ramp H with sup error <= target_err on [0, 1].

    Without an explicit degree the smallest d = 1, 2, ... reaching the target is
    returned. A fixed degree is honoured even when it misses the target.
    """
    if not (0.0 < target_err < 0.5):
        raise InvalidParameterError(f"target_err must lie in (0, 0.5), got {target_err}")
    if max_degree < 1:
        raise InvalidParameterError("max_degree must be >= 1")

    def ramp(x):
        return hspec(x, th)

    grid = unit_grid(grid_points, th)

    if degree is not None:
        if degree < 1:
            raise InvalidParameterError("degree must be >= 1")
        q1 = fit_chebyshev(ramp, degree, grid, contract)
        if q1.achieved_sup_error > target_err:
            logger.warning("q1_fixed_degree_misses_target", degree=degree,
                           sup_error=q1.achieved_sup_error, target=target_err)
        return q1

    best = math.inf
    for d in range(1, max_degree + 1):
        q1 = fit_chebyshev(ramp, d, grid, contract)
        if q1.achieved_sup_error <= target_err:
            logger.debug("q1_fitted", degree=d, sup_error=q1.achieved_sup_error, c1=th.c1, c2=th.c2)
            return q1
        best = min(best, q1.achieved_sup_error)
    raise DegreeExhaustedError(max_degree, best)


def fit_highpass_baseline(th: Thresholds, degree: int, grid_points: int = DEFAULT_GRID_POINTS) -> ChebyshevExpansion:
    """Exact Chebyshev projection of the indicator 1(x >= (c1 + c2)/2), no damping.

    achieved_sup_error is measured against H on [0, c2] u [c1, 1], where H and
    the indicator agree.
    """
    if degree < 1:
        raise InvalidParameterError("degree must be >= 1")
    s0 = 2.0 * th.midpoint - 1.0
    theta0 = math.acos(s0)
    i = np.arange(1, degree + 1)
    coeffs = np.empty(degree + 1)
    coeffs[0] = 2.0 * theta0 / math.pi
    coeffs[1:] = (2.0 / math.pi) * np.sin(i * theta0) / i
    expansion = ChebyshevExpansion(degree, coeffs)
    err = sup_error(expansion, lambda x: hspec(x, th), passband_grid(grid_points, th))
    return ChebyshevExpansion(degree, coeffs, err, {"kind": "baseline"})


def _series(coeffs: np.ndarray) -> np.ndarray:
    s = np.array(coeffs, dtype=np.float64)
    s[0] *= 0.5
    return s
