"""Simulated public blackboard for m machines.

Rounds are synchronous and numbered from 0. A message posted in round t is
visible to its writer immediately and to every machine from round t + 1 on.
Machines are indexed 1..m; machine 1 also acts as coordinator.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import structlog

from ..exceptions import InvalidParameterError, ProtocolAbortError, RangeOverflowError, VisibilityError, CoinMisuseError
from ..utils.bit_counter import BitCounter
from .coin import PublicCoin
from .ledger import BitLedger
from .quantization import QuantizationSpec, message_range, quantize

logger = structlog.get_logger()


@dataclass(frozen=True, eq=False)
class Message:
    message_id: int
    round: int
    writer: int
    payload: np.ndarray
    bits: int
    range_bound: Optional[float] = None
    tau: Optional[float] = None
    label: str = ""


class Blackboard:
    """Round-synchronous channel with quantization and a bit ledger"""

    def __init__(self, m: int, quantization: Optional[QuantizationSpec] = None, trace: bool = False):
        if m < 1:
            raise InvalidParameterError("need at least one machine")
        self.m = m
        self.quantization = quantization or QuantizationSpec.exact()
        self.ledger = BitLedger()
        self.messages: List[Message] = []
        self.round = 0
        self.broadcast_rounds = 0
        self.trace_enabled = trace
        self.trace_lines: List[str] = []
        self.bit_counter = BitCounter()
        self._coin: Optional[PublicCoin] = None

    def advance(self) -> int:
        self.round += 1
        return self.round

    def public_coin(self, seed: int) -> PublicCoin:
        """Shared random stream; one seeding per protocol run"""
        if self._coin is not None:
            raise CoinMisuseError(f"public coin already seeded with {self._coin.seed}")
        self._coin = PublicCoin(seed)
        return self._coin

    @property
    def coin(self) -> Optional[PublicCoin]:
        return self._coin

    def _check_writer(self, writer: int) -> None:
        if not (1 <= writer <= self.m):
            raise InvalidParameterError(f"writer {writer} outside machines 1..{self.m}")

    def post_vector(self, writer: int, v: np.ndarray, q: Optional[QuantizationSpec] = None, label: str = "") -> Message:
        """Quantize v under q (board default if omitted), charge the ledger and publish"""
        self._check_writer(writer)
        q = q or self.quantization
        v = np.asarray(v, dtype=np.float64)
        if not np.all(np.isfinite(v)):
            raise ProtocolAbortError(f"machine {writer} posted a non-finite entry in round {self.round}")

        if not q.is_fixed:
            payload = v.copy()
            bits = self.bit_counter.exact_bits(v.size)
            range_bound = None
        else:
            if q.range_bound is not None:
                range_bound = q.range_bound
                peak = float(np.max(np.abs(v))) if v.size else 0.0
                if peak > range_bound:
                    raise RangeOverflowError(f"entry {peak:.4g} exceeds declared range {range_bound:g}")
            else:
                range_bound = message_range(v)
            payload = quantize(v, q.tau)
            bits = self.bit_counter.fixed_point_bits(v.size, range_bound, q.tau)

        return self._publish(writer, payload, bits, range_bound, q.tau if q.is_fixed else None, label)

    def post_encoded(self, writer: int, payload: np.ndarray, bits: int, label: str = "") -> Message:
        """Publish a payload the writer already encoded at a known bit cost"""
        self._check_writer(writer)
        return self._publish(writer, np.asarray(payload, dtype=np.float64), bits, None, None, label)

    def _publish(self, writer, payload, bits, range_bound, tau, label) -> Message:
        payload.setflags(write=False)
        message = Message(len(self.messages), self.round, writer, payload, int(bits), range_bound, tau, label)
        self.messages.append(message)
        self.ledger.charge(self.round, writer, message.bits, label)
        if self.trace_enabled:
            self.trace_lines.append(
                f"round={message.round} writer={writer} length={payload.size} "
                f"R={range_bound if range_bound is not None else '-'} tau={tau if tau is not None else '-'}"
            )
        logger.debug("message_posted", round=message.round, writer=writer, bits=message.bits, label=label)
        return message

    def read(self, reader: int, message_id: int) -> np.ndarray:
        """Payload of a message, subject to round visibility"""
        self._check_writer(reader)
        message = self.messages[message_id]
        if message.round < self.round or message.writer == reader:
            return message.payload
        raise VisibilityError(
            f"machine {reader} cannot read message {message_id} of machine {message.writer} in round {self.round}"
        )

    @property
    def total_bits(self) -> int:
        return self.ledger.total_bits

    def trace(self) -> str:
        return "\n".join(self.trace_lines)


def post_vector(board: Blackboard, writer: int, v: np.ndarray, q: Optional[QuantizationSpec] = None) -> np.ndarray:
    """Post v and return the quantized vector every machine will see"""
    return board.post_vector(writer, v, q).payload


def public_coin(board: Blackboard, seed: int) -> PublicCoin:
    return board.public_coin(seed)
