import math

EXACT_BITS_PER_SCALAR = 64
RANGE_HEADER_BITS = 16


def next_power_of_two(x: float) -> float:
    """Smallest power of two >= x (1.0 for x <= 0)"""
    if x <= 0.0:
        return 1.0
    mantissa, exponent = math.frexp(x)
    if mantissa == 0.5:
        return x
    return math.ldexp(1.0, exponent)


def floor_power_of_two(x: float) -> float:
    """Largest power of two <= x"""
    if x <= 0.0:
        raise ValueError("x must be positive")
    mantissa, exponent = math.frexp(x)
    return math.ldexp(1.0, exponent - 1)


def bits_for_count(n: int) -> int:
    """Bits needed to write an integer in [0, n]"""
    return max(1, math.ceil(math.log2(n + 1)))


class BitCounter:
    """Bit costs of blackboard payloads"""

    def __init__(self, header_bits: int = RANGE_HEADER_BITS):
        self.header_bits = header_bits

    def bits_per_entry(self, range_bound: float, tau: float) -> int:
        """ceil(log2(2R/tau + 1)) bits address every grid point in [-R, R]"""
        levels = 2.0 * range_bound / tau + 1.0
        return math.ceil(math.log2(levels))

    def fixed_point_bits(self, entries: int, range_bound: float, tau: float) -> int:
        """Cost of one fixed-point message: payload plus its range header"""
        return entries * self.bits_per_entry(range_bound, tau) + self.header_bits

    def exact_bits(self, entries: int) -> int:
        return entries * EXACT_BITS_PER_SCALAR
