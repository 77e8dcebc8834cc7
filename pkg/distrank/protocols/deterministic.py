"""Deterministic protocol: every machine but the first posts a quantized low-rank factor.

Machine i >= 2 writes A_i = B_i B_i^T with at most 2r columns and posts each
entry of B_i on the uniform grid of 2^b points over [-1, 1], where
b = ceil(log2(12 m r n / (c1 - c2))). Machine 1 rebuilds
A~ = A_1 + sum_i B~_i B~_i^T and reports how many eigenvalues of A~ exceed
(c1 + c2) / 2. The quantization error in Frobenius norm stays below
(c1 - c2) / 2, so the count is pinned between rank(A, c1) and rank(A, c2).
"""

import math
from typing import Dict, Optional, Sequence

import numpy as np

from ..blackboard import Blackboard, Machine, grid_quantize_unit
from ..config import DistRankSettings
from ..exceptions import InvalidParameterError, RangeOverflowError
from ..polyfilter import Thresholds
from ..spectra import eigvalsh, psd_sqrt_factor
from ..utils.bit_counter import RANGE_HEADER_BITS, bits_for_count
from .base import BaseProtocol
from .coordinator import COORDINATOR
from .reports import DetProtocolReport


def det_bits_per_entry(n: int, m: int, r: int, th: Thresholds) -> int:
    return math.ceil(math.log2(12.0 * m * r * n / th.gap))


def predict_deterministic_bits(n: int, m: int, r: int, th: Thresholds, columns: Dict[int, int]) -> int:
    """Ledger total given the number of factor columns each machine i >= 2 posts"""
    b = det_bits_per_entry(n, m, r, th)
    return sum(n * k * b + RANGE_HEADER_BITS for k in columns.values()) + bits_for_count(n)


class DeterministicRankProtocol(BaseProtocol):
    def __init__(self, machines: Sequence[Machine], settings: Optional[DistRankSettings] = None):
        super().__init__("deterministic", machines, settings)

    def encode_factor(self, machine: Machine, r: int, bits: int) -> np.ndarray:
        """Local work of machine i: factor its shard and snap entries to the grid"""
        B = psd_sqrt_factor(machine.local_shard(machine.index), 2 * r, tol=self.settings.eigen_tolerance)
        step = 2.0 / (2 ** bits - 1)
        peak = float(np.max(np.abs(B))) if B.size else 0.0
        if peak > 1.0 + step:
            raise RangeOverflowError(f"machine {machine.index} factor entry {peak:.4g} outside [-1, 1]")
        return grid_quantize_unit(B, bits)

    async def execute(
        self,
        th: Thresholds,
        r: int,
        board: Optional[Blackboard] = None,
        validate: bool = True,
    ) -> DetProtocolReport:
        if r < 1:
            raise InvalidParameterError("rank cap parameter r must be >= 1")
        log = self.logger.bind(r=r, c1=th.c1, c2=th.c2)
        log.info("protocol_started")
        if validate:
            self.certify()

        board = board or Blackboard(self.m)
        self.board = board
        b = det_bits_per_entry(self.n, self.m, r, th)

        board.advance()
        columns: Dict[int, int] = {}
        posted = []
        for machine in self.machines[1:]:
            B = self.encode_factor(machine, r, b)
            k = B.shape[1]
            columns[machine.index] = k
            message = board.post_encoded(machine.index, B, self.n * k * b + RANGE_HEADER_BITS, label="factor")
            posted.append(message.message_id)
            log.debug("factor_posted", machine=machine.index, columns=k)

        board.advance()
        first = self.machines[0]
        approx = np.array(first.local_shard(COORDINATOR).entries, dtype=np.float64)
        for message_id in posted:
            B = board.read(COORDINATOR, message_id)
            approx += B @ B.T

        threshold = th.midpoint
        rhat = int(np.count_nonzero(eigvalsh(approx) > threshold))
        board.post_encoded(COORDINATOR, np.array([rhat], dtype=np.float64), bits_for_count(self.n), label="answer")

        report = DetProtocolReport(
            rhat=rhat,
            bits_used=board.total_bits,
            bits_per_entry=b,
            threshold_used=threshold,
            columns=columns,
            n=self.n,
            m=self.m,
            r=r,
        )
        log.info("protocol_finished", rhat=rhat, bits=report.bits_used)
        return report


async def deterministic_rank_protocol(
    machines: Sequence[Machine],
    board: Optional[Blackboard],
    th: Thresholds,
    r: int,
    settings: Optional[DistRankSettings] = None,
    validate: bool = True,
) -> DetProtocolReport:
    return await DeterministicRankProtocol(machines, settings).execute(th, r, board=board, validate=validate)
