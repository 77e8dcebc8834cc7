"""distrank - distributed generalized-rank estimation with exact bit accounting"""

__version__ = "0.1.0"

from .protocols import (
    RandomizedRankProtocol,
    DeterministicRankProtocol,
    ChebyshevMatvecProtocol,
    randomized_rank_estimate,
    deterministic_rank_protocol,
    distributed_cheb_matvec,
)
from .polyfilter import Thresholds, build_composite_filter

__all__ = [
    'RandomizedRankProtocol', 'DeterministicRankProtocol', 'ChebyshevMatvecProtocol',
    'randomized_rank_estimate', 'deterministic_rank_protocol', 'distributed_cheb_matvec',
    'Thresholds', 'build_composite_filter',
]
