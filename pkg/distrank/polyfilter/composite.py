from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from ..exceptions import InvalidParameterError
from .booster import eval_q2_split, q2_coefficients
from .chebyshev import DEFAULT_GRID_POINTS, ChebyshevExpansion, fit_q1, sup_error
from .thresholds import Thresholds, hspec, passband_grid


@dataclass(frozen=True, eq=False)
class CompositeFilter:
    """f = q2 o q1: a Chebyshev ramp fit boosted by the degree-(2p+1) Beta polynomial"""

    thresholds: Thresholds
    q1: ChebyshevExpansion
    p: int
    q2_coeffs: np.ndarray

    @property
    def q1_degree(self) -> int:
        return self.q1.degree

    @property
    def total_degree(self) -> int:
        return self.q1.degree * (2 * self.p + 1)

    @property
    def q1_applications(self) -> int:
        return 2 * self.p + 1

    def q2(self, z):
        return eval_q2_split(self.q2_coeffs, z)

    def __call__(self, x):
        return eval_filter(self, x)

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": "composite",
            "c1": self.thresholds.c1,
            "c2": self.thresholds.c2,
            "p": self.p,
            "q1_degree": self.q1.degree,
            "total_degree": self.total_degree,
            "achieved_sup_error": self.q1.achieved_sup_error,
        }

    def to_document(self) -> "FilterDocument":
        return FilterDocument(
            c1=self.thresholds.c1,
            c2=self.thresholds.c2,
            p=self.p,
            q1_degree=self.q1.degree,
            q1_coeffs=self.q1.coeffs.tolist(),
            q2_coeffs=self.q2_coeffs.tolist(),
            achieved_sup_error=self.q1.achieved_sup_error,
        )


class FilterDocument(BaseModel):
    """JSON form of a fitted composite filter"""

    c1: float
    c2: float
    p: int = Field(..., ge=0)
    q1_degree: int = Field(..., ge=0)
    q1_coeffs: List[float]
    q2_coeffs: List[float]
    achieved_sup_error: float

    def to_filter(self) -> CompositeFilter:
        if len(self.q1_coeffs) != self.q1_degree + 1:
            raise InvalidParameterError("q1_coeffs length does not match q1_degree")
        if len(self.q2_coeffs) != 2 * self.p + 2:
            raise InvalidParameterError("q2_coeffs length does not match p")
        th = Thresholds(self.c1, self.c2)
        q1 = ChebyshevExpansion(self.q1_degree, np.array(self.q1_coeffs), self.achieved_sup_error)
        return CompositeFilter(th, q1, self.p, np.array(self.q2_coeffs))

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.model_dump_json(indent=2))
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FilterDocument":
        return cls.model_validate_json(Path(path).read_text())


def build_composite_filter(
    th: Thresholds,
    p: int,
    q1_degree: Optional[int] = None,
    target_err: float = 0.1,
    max_degree: int = 200,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> CompositeFilter:
    q1 = fit_q1(th, target_err=target_err, max_degree=max_degree, degree=q1_degree, grid_points=grid_points)
    return CompositeFilter(th, q1, p, q2_coefficients(p))


def eval_filter(f: CompositeFilter, x):
    """q2(q1(x)): Clenshaw for q1, Horner for q2"""
    return f.q2(f.q1(x))


def sup_error_on_passbands(func, th: Thresholds, grid_points: int = DEFAULT_GRID_POINTS) -> float:
    """sup over [0, c2] u [c1, 1] of |func - H|"""
    return sup_error(func, lambda x: hspec(x, th), passband_grid(grid_points, th))
