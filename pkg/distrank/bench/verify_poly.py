"""Error curves of the composite filter against a plain Chebyshev fit of matched degree"""

import csv
import io
from typing import List, Optional

from pydantic import BaseModel

from ..polyfilter import (
    CompositeFilter,
    Thresholds,
    fit_chebyshev,
    fit_q1,
    hspec,
    q2_coefficients,
    sup_error_on_passbands,
    unit_grid,
)
from ..polyfilter.chebyshev import DEFAULT_GRID_POINTS

VERIFY_MAX_Q1_DEGREE = 400


class PolyErrorRow(BaseModel):
    p: int
    total_degree: int
    composite_error: float
    chebyshev_error: float


def verify_poly(
    th: Thresholds,
    p_max: int,
    q1_degree: Optional[int] = None,
    target_err: float = 0.1,
    max_degree: int = VERIFY_MAX_Q1_DEGREE,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> List[PolyErrorRow]:
    """One row per p = 0..p_max; both errors are sup |. - H| over [0, c2] u [c1, 1].

    Without q1_degree the smallest q1 with sup error <= target_err is used.
    """
    rows = []
    grid = unit_grid(grid_points, th)
    q1 = fit_q1(th, target_err=target_err, max_degree=max_degree, degree=q1_degree, grid_points=grid_points)
    for p in range(p_max + 1):
        composite = CompositeFilter(th, q1, p, q2_coefficients(p))
        degree = composite.total_degree
        chebyshev = fit_chebyshev(lambda x: hspec(x, th), degree, grid, contract=True)
        rows.append(PolyErrorRow(
            p=p,
            total_degree=degree,
            composite_error=sup_error_on_passbands(composite, th, grid_points),
            chebyshev_error=sup_error_on_passbands(chebyshev, th, grid_points),
        ))
    return rows


def poly_rows_to_csv(rows: List[PolyErrorRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "total_degree", "composite_error", "chebyshev_error"])
    for row in rows:
        writer.writerow([row.p, row.total_degree, repr(row.composite_error), repr(row.chebyshev_error)])
    return buf.getvalue()
