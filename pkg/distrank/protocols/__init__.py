"""Blackboard protocols: distributed Chebyshev matvec, randomized and deterministic rank estimation"""

from .reports import (
    EstimateReport,
    DetProtocolReport,
    round_estimate,
    resolve_delta,
    containment_bounds,
    containment_failure_probability,
)
from .base import BaseProtocol
from .coordinator import COORDINATOR, Coordinator
from .cheb_matvec import (
    ChebyshevMatvecProtocol,
    distributed_cheb_matvec,
    clenshaw_matvec,
    clenshaw_gain,
    messages_per_application,
)
from .randomized import (
    FilterKind,
    RandomizedRankProtocol,
    randomized_rank_estimate,
    apply_probe_filter,
    declared_range,
    degree_for_p,
    predict_randomized_bits,
)
from .deterministic import (
    DeterministicRankProtocol,
    deterministic_rank_protocol,
    det_bits_per_entry,
    predict_deterministic_bits,
)

__all__ = [
    'EstimateReport', 'DetProtocolReport', 'round_estimate', 'resolve_delta',
    'containment_bounds', 'containment_failure_probability',
    'BaseProtocol', 'COORDINATOR', 'Coordinator',
    'ChebyshevMatvecProtocol', 'distributed_cheb_matvec', 'clenshaw_matvec', 'clenshaw_gain',
    'messages_per_application',
    'FilterKind', 'RandomizedRankProtocol', 'randomized_rank_estimate', 'apply_probe_filter',
    'declared_range', 'degree_for_p', 'predict_randomized_bits',
    'DeterministicRankProtocol', 'deterministic_rank_protocol', 'det_bits_per_entry',
    'predict_deterministic_bits',
]
