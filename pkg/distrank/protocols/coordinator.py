import asyncio
from typing import List, Sequence

import numpy as np
import structlog

from ..blackboard import Blackboard, Machine
from ..exceptions import DimensionMismatchError

logger = structlog.get_logger()

COORDINATOR = 1


class Coordinator:
    """Machine 1's side of a broadcast round.

    The coordinator posts a vector, every machine replies with its local
    product, and the replies are summed in ascending machine index so the
    result does not depend on the thread schedule.
    """

    def __init__(self, machines: Sequence[Machine], board: Blackboard, max_concurrency: int = 8):
        self.machines: List[Machine] = list(machines)
        self.board = board
        self.n = self.machines[0].n
        self.semaphore = asyncio.Semaphore(max_concurrency)

    async def _run_with_semaphore(self, coro):
        async with self.semaphore:
            return await coro

    async def apply_sum(self, v: np.ndarray, label: str = "broadcast") -> np.ndarray:
        """sum_i A_i v as seen on the board, in one broadcast round"""
        if v.shape[0] != self.n:
            raise DimensionMismatchError(f"vector length {v.shape[0]} does not match n={self.n}")
        board = self.board
        board.advance()
        board.broadcast_rounds += 1
        message = board.post_vector(COORDINATOR, v, label=label)

        board.advance()
        products = await asyncio.gather(
            *[self._run_with_semaphore(machine.product(board, message.message_id)) for machine in self.machines]
        )

        total = np.zeros(self.n)
        for machine, product in zip(self.machines, products):
            total += board.post_vector(machine.index, product, label="product").payload
        return total
