from abc import ABC, abstractmethod
from typing import Any, Optional, Sequence

import structlog

from ..blackboard import Machine, certify_spectrum
from ..config import DistRankSettings, get_settings
from ..exceptions import InvalidParameterError


class BaseProtocol(ABC):
    """Base class for all blackboard protocols"""

    def __init__(self, name: str, machines: Sequence[Machine], settings: Optional[DistRankSettings] = None):
        if not machines:
            raise InvalidParameterError("a protocol needs at least one machine")
        self.name = name
        self.machines = list(machines)
        self.settings = settings or get_settings()
        self.logger = structlog.get_logger().bind(protocol=name, n=self.n, m=self.m)

    @property
    def n(self) -> int:
        return self.machines[0].n

    @property
    def m(self) -> int:
        return len(self.machines)

    def certify(self) -> float:
        """Spectral-norm certificate of the shard sum (off-board, zero bits)"""
        return certify_spectrum(
            self.machines,
            iterations=self.settings.spectrum_power_iterations,
            tolerance=self.settings.spectrum_tolerance,
        )

    @abstractmethod
    async def execute(self, *args, **kwargs) -> Any:
        """Run the protocol"""
        pass
