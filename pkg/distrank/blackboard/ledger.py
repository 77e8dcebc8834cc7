import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Union


@dataclass(frozen=True)
class LedgerRecord:
    round: int
    writer: int
    bits: int
    label: str = ""


@dataclass
class BitLedger:
    """Exact per-message account of bits written on the blackboard"""

    per_round: List[LedgerRecord] = field(default_factory=list)
    total_bits: int = 0

    def charge(self, round_index: int, writer: int, bits: int, label: str = "") -> LedgerRecord:
        record = LedgerRecord(round_index, writer, int(bits), label)
        self.per_round.append(record)
        self.total_bits += record.bits
        return record

    def bits_since(self, mark: int) -> int:
        """Bits charged by records appended after position mark"""
        return sum(r.bits for r in self.per_round[mark:])

    def mark(self) -> int:
        return len(self.per_round)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["round", "writer", "bits", "cumulative_bits"])
        cumulative = 0
        for r in self.per_round:
            cumulative += r.bits
            writer.writerow([r.round, r.writer, r.bits, cumulative])
        return buf.getvalue()

    def export_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_csv())
        return path
