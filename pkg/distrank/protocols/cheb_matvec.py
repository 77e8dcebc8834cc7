"""Distributed Clenshaw evaluation of q(A) v for A = sum_i A_i.

For j = d, ..., 1 the coordinator broadcasts b_{j+1}, collects sum_i A_i b_{j+1}
and forms b_j = 4 A b_{j+1} - 2 b_{j+1} - b_{j+2} + a_j v. One more round gives
A b_1 and q(A) v = (2 A b_1 - b_1) - b_2 + a_0 v / 2. That is d + 1 broadcast
rounds in total.
"""

from typing import Optional, Sequence

import numpy as np

from ..blackboard import Blackboard, Machine, QuantizationSpec
from ..config import DistRankSettings
from ..exceptions import DimensionMismatchError
from ..polyfilter import ChebyshevExpansion
from .base import BaseProtocol
from .coordinator import Coordinator


async def clenshaw_matvec(coordinator: Coordinator, q: ChebyshevExpansion, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != coordinator.n:
        raise DimensionMismatchError(f"vector length {v.shape[0]} does not match n={coordinator.n}")
    a = q.coeffs
    b1 = np.zeros_like(v)
    b2 = np.zeros_like(v)
    for j in range(q.degree, 0, -1):
        Ab = await coordinator.apply_sum(b1)
        b1, b2 = 4.0 * Ab - 2.0 * b1 - b2 + a[j] * v, b1
    Ab = await coordinator.apply_sum(b1)
    return (2.0 * Ab - b1) - b2 + 0.5 * a[0] * v


class ChebyshevMatvecProtocol(BaseProtocol):
    """Standalone run of the distributed Chebyshev matvec"""

    def __init__(self, machines: Sequence[Machine], board: Blackboard, settings: Optional[DistRankSettings] = None):
        super().__init__("cheb_matvec", machines, settings)
        self.board = board
        self.coordinator = Coordinator(self.machines, board, self.settings.max_concurrency)

    async def execute(self, q: ChebyshevExpansion, v: np.ndarray, validate: bool = True) -> np.ndarray:
        if validate:
            self.certify()
        rounds_before = self.board.broadcast_rounds
        out = await clenshaw_matvec(self.coordinator, q, v)
        self.logger.debug("cheb_matvec_done", degree=q.degree, rounds=self.board.broadcast_rounds - rounds_before,
                          bits=self.board.total_bits)
        return out


async def distributed_cheb_matvec(
    machines: Sequence[Machine],
    board: Blackboard,
    q: ChebyshevExpansion,
    v: np.ndarray,
    validate: bool = True,
) -> np.ndarray:
    """q(A) v over the blackboard"""
    return await ChebyshevMatvecProtocol(machines, board).execute(q, v, validate=validate)


def clenshaw_gain(q: ChebyshevExpansion) -> float:
    """sum_k k |a_k|: bounds ||b_j|| / ||v|| for every broadcast b_j, using ||U_k(2A - I)|| <= k + 1"""
    k = np.arange(q.degree + 1)
    return float(np.sum(k * np.abs(q.coeffs)))


def messages_per_application(q: ChebyshevExpansion, m: int) -> int:
    return (q.degree + 1) * (m + 1)
