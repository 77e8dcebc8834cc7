"""Experiment sweeps, polynomial error curves and the orthogonal-ensemble check"""

from .seeds import hash64, trial_seed
from .experiment import ExperimentRunner, SweepPoint, run_experiment
from .verify_poly import PolyErrorRow, verify_poly, poly_rows_to_csv
from .ensemble_check import EnsembleCheckReport, ensemble_rank_check

__all__ = [
    'hash64', 'trial_seed',
    'ExperimentRunner', 'SweepPoint', 'run_experiment',
    'PolyErrorRow', 'verify_poly', 'poly_rows_to_csv',
    'EnsembleCheckReport', 'ensemble_rank_check',
]
