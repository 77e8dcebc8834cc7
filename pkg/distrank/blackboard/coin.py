"""Public randomness shared by every machine.

The stream is Philox4x64 keyed by the 64-bit seed. A uniform is built from the
top 52 bits of each raw draw as u = (k + 1/2) / 2^52, which lies strictly
inside (0, 1), and a Gaussian is ndtri(u). Any implementation with the same
counter-based generator reproduces the stream.
"""

import numpy as np
from scipy.special import ndtri

_TWO_POW_52 = float(2 ** 52)


class PublicCoin:
    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFF_FFFF_FFFF_FFFF
        self._bitgen = np.random.Philox(key=self.seed)
        self.draws = 0

    def raw(self, size: int) -> np.ndarray:
        self.draws += size
        return self._bitgen.random_raw(size)

    def uniforms(self, size: int) -> np.ndarray:
        k = (self.raw(size) >> np.uint64(12)).astype(np.float64)
        return (k + 0.5) / _TWO_POW_52

    def gaussian(self, size: int) -> np.ndarray:
        return ndtri(self.uniforms(size))
