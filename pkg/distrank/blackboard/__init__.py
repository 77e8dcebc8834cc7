"""Simulated public-blackboard runtime with quantization and a bit ledger"""

from .quantization import QuantizationSpec, default_tau, quantize, grid_quantize_unit
from .ledger import BitLedger, LedgerRecord
from .coin import PublicCoin
from .board import Blackboard, Message, post_vector, public_coin
from .machine import Machine, PsdShard, build_machines, certify_spectrum

__all__ = [
    'QuantizationSpec', 'default_tau', 'quantize', 'grid_quantize_unit',
    'BitLedger', 'LedgerRecord', 'PublicCoin',
    'Blackboard', 'Message', 'post_vector', 'public_coin',
    'Machine', 'PsdShard', 'build_machines', 'certify_spectrum',
]
