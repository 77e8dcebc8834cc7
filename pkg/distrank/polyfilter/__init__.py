"""Step surrogate, Chebyshev fits, the Beta booster and the composite filter"""

from .thresholds import Thresholds, hspec, unit_grid, passband_grid
from .chebyshev import (
    ChebyshevExpansion,
    chebyshev_gauss_coefficients,
    fit_chebyshev,
    fit_q1,
    fit_highpass_baseline,
)
from .booster import q2_coefficients, q2_exact_coefficients, coefficient_mass, eval_q2, eval_q2_monomial, eval_q2_split
from .composite import (
    CompositeFilter,
    FilterDocument,
    build_composite_filter,
    eval_filter,
    sup_error_on_passbands,
)

__all__ = [
    'Thresholds', 'hspec', 'unit_grid', 'passband_grid',
    'ChebyshevExpansion', 'chebyshev_gauss_coefficients', 'fit_chebyshev', 'fit_q1', 'fit_highpass_baseline',
    'q2_coefficients', 'q2_exact_coefficients', 'coefficient_mass', 'eval_q2', 'eval_q2_monomial', 'eval_q2_split',
    'CompositeFilter', 'FilterDocument', 'build_composite_filter', 'eval_filter', 'sup_error_on_passbands',
]
