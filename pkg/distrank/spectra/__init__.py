"""Dense symmetric linear algebra and the generalized-rank oracle"""

from .linalg import (
    SymMatrix,
    EigenDecomposition,
    eigh,
    eigvalsh,
    generalized_rank,
    generalized_rank_from_spectrum,
    matvec,
    psd_sqrt_factor,
)
from .matrix_io import read_matrix, write_matrix, encode_matrix, decode_matrix

__all__ = [
    'SymMatrix', 'EigenDecomposition', 'eigh', 'eigvalsh', 'generalized_rank',
    'generalized_rank_from_spectrum', 'matvec', 'psd_sqrt_factor',
    'read_matrix', 'write_matrix', 'encode_matrix', 'decode_matrix',
]
