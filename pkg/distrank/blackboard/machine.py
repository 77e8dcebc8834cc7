import asyncio
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import structlog

from ..exceptions import InvalidParameterError, NotPsdError, ShardAccessError, SpectrumViolationError
from ..spectra import SymMatrix, eigvalsh, matvec
from .board import Blackboard

logger = structlog.get_logger()

SHARD_PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PsdShard:
    """One machine's local PSD summand A_i"""

    machine_index: int
    matrix: SymMatrix

    @property
    def n(self) -> int:
        return self.matrix.n

    def validate(self, tol: float = SHARD_PSD_TOL) -> "PsdShard":
        smallest = float(eigvalsh(self.matrix)[-1])
        if smallest < -tol:
            raise NotPsdError(f"shard {self.machine_index} has eigenvalue {smallest:.3e} < -{tol:g}")
        return self


class Machine:
    """A player holding one shard; the shard never leaves the machine"""

    def __init__(self, shard: PsdShard):
        self.index = shard.machine_index
        self.name = f"machine-{self.index}"
        self._shard = shard

    @property
    def n(self) -> int:
        return self._shard.n

    def local_shard(self, requester: int) -> SymMatrix:
        if requester != self.index:
            raise ShardAccessError(f"machine {requester} may not read the shard of machine {self.index}")
        return self._shard.matrix

    def local_matvec(self, x: np.ndarray) -> np.ndarray:
        return matvec(self._shard.matrix, x)

    async def product(self, board: Blackboard, message_id: int) -> np.ndarray:
        """A_i times the vector in a visible message, computed off the event loop"""
        x = board.read(self.index, message_id)
        return await asyncio.to_thread(self.local_matvec, x)


def build_machines(shards: Sequence[PsdShard], validate: bool = True, tol: float = SHARD_PSD_TOL) -> List[Machine]:
    """Machines ordered by index; indices must be exactly 1..m and dimensions equal"""
    ordered = sorted(shards, key=lambda s: s.machine_index)
    indices = [s.machine_index for s in ordered]
    if indices != list(range(1, len(ordered) + 1)):
        raise InvalidParameterError(f"machine indices must be 1..m, got {indices}")
    dims = {s.n for s in ordered}
    if len(dims) != 1:
        raise InvalidParameterError(f"shards disagree on dimension: {sorted(dims)}")
    if validate:
        for shard in ordered:
            shard.validate(tol)
    return [Machine(s) for s in ordered]


def certify_spectrum(machines: Sequence[Machine], iterations: int = 50, tolerance: float = 1e-6, seed: int = 0) -> float:
    """Power-iteration estimate of ||sum A_i||_2 from local products only; raises above 1 + tolerance"""
    n = machines[0].n
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(iterations):
        y = np.zeros(n)
        for machine in machines:
            y += machine.local_matvec(x)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            break
        estimate = norm
        x = y / norm
    if estimate > 1.0 + tolerance:
        raise SpectrumViolationError(f"||A||_2 estimate {estimate:.8f} exceeds 1 + {tolerance:g}")
    logger.debug("spectrum_certified", norm_estimate=estimate, iterations=iterations)
    return estimate
