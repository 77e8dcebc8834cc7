"""The Beta-integral booster q2(x) = (1/B(p+1, p+1)) * int_0^x t^p (1-t)^p dt.

Coefficients are built in exact rational arithmetic and converted to reals.
Scalar evaluation is Horner on the monomial form for z <= 1/2 and uses the
symmetry q2(z) = 1 - q2(1 - z) above, so values near 0 and 1 keep full
relative accuracy.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Tuple

import numpy as np

from ..exceptions import InvalidParameterError

MAX_BOOSTER_P = 30


def _check_p(p: int) -> None:
    if not (0 <= p <= MAX_BOOSTER_P):
        raise InvalidParameterError(f"booster parameter p must lie in [0, {MAX_BOOSTER_P}], got {p}")


@lru_cache(maxsize=None)
def q2_exact_coefficients(p: int) -> Tuple[Fraction, ...]:
    """Monomial coefficients c_0..c_{2p+1} as exact fractions"""
    _check_p(p)
    scale = Fraction(factorial(2 * p + 1), factorial(p) ** 2)
    coeffs = [Fraction(0)] * (2 * p + 2)
    for k in range(p + 1):
        coeffs[p + k + 1] = scale * comb(p, k) * (-1) ** k / (p + k + 1)
    return tuple(coeffs)


def q2_coefficients(p: int) -> np.ndarray:
    """Monomial coefficients of q2 as reals, length 2p + 2, constant term 0"""
    return np.array([float(c) for c in q2_exact_coefficients(p)])


def coefficient_mass(p: int) -> Fraction:
    return sum((abs(c) for c in q2_exact_coefficients(p)), Fraction(0))


def eval_q2_monomial(coeffs: np.ndarray, z):
    """Plain Horner on monomial coefficients"""
    out = np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.float64), coeffs)
    return float(out) if np.ndim(out) == 0 else out


def eval_q2_split(coeffs: np.ndarray, z):
    """Horner on coeffs for z <= 1/2 and 1 - q(1 - z) above"""
    z = np.asarray(z, dtype=np.float64)
    low = np.polynomial.polynomial.polyval(z, coeffs)
    high = 1.0 - np.polynomial.polynomial.polyval(1.0 - z, coeffs)
    out = np.where(z <= 0.5, low, high)
    return float(out) if out.ndim == 0 else out


def eval_q2(p: int, z):
    """q2(z) for scalars or arrays, valid on all of R"""
    return eval_q2_split(q2_coefficients(p), z)
