"""Exception hierarchy for distrank"""

from typing import Optional


class DistRankError(Exception):
    """Base class for all distrank errors"""


class InvalidParameterError(DistRankError, ValueError):
    """A parameter is outside its documented range"""


class DimensionMismatchError(DistRankError, ValueError):
    """Operand shapes do not agree"""


class EigenSolverError(DistRankError):
    """The dense symmetric eigensolver failed to converge"""

    def __init__(self, unconverged: int, message: Optional[str] = None):
        self.unconverged = unconverged
        super().__init__(message or f"eigensolver did not converge ({unconverged} off-diagonal elements)")


class NotPsdError(DistRankError, ValueError):
    """Matrix has an eigenvalue below the negative tolerance"""


class RankCapExceededError(DistRankError):
    """More eigenvalues exceed the tolerance than the rank cap allows"""

    def __init__(self, found: int, rank_cap: int):
        self.found = found
        self.rank_cap = rank_cap
        super().__init__(f"{found} eigenvalues above tolerance, rank cap is {rank_cap}")


class DegreeExhaustedError(DistRankError):
    """No polynomial degree up to the cap reaches the target error"""

    def __init__(self, max_degree: int, best_error: float):
        self.max_degree = max_degree
        self.best_error = best_error
        super().__init__(f"no degree <= {max_degree} reached target (best sup error {best_error:.4g})")


class MatrixFormatError(DistRankError, ValueError):
    """Matrix file is malformed"""


class ProtocolAbortError(DistRankError):
    """A protocol run cannot continue"""


class RangeOverflowError(ProtocolAbortError):
    """A posted entry exceeds the declared fixed-point range"""


class SpectrumViolationError(ProtocolAbortError):
    """The shard sum fails the spectral norm certificate"""


class CoinMisuseError(ProtocolAbortError):
    """The public coin was re-seeded during a protocol run"""


class VisibilityError(ProtocolAbortError):
    """A machine tried to read a message it cannot see yet"""


class ShardAccessError(ProtocolAbortError):
    """A machine tried to read another machine's shard"""
