"""差分隐私模块"""

from .budget import PrivacyBudget, BudgetTotal, BudgetLedger
from .rng import SeededRng
from .mechanisms import (
    laplace_sample, laplace_noise, noisy_counts,
    exponential_mechanism, gaussian_sigma
)
from .private_kmedian import (
    BicriteriaResult, candidate_set, check_inside_ball, sphere_seeds, noisy_lloyd_centers,
    private_bicriteria_solve, private_bicriteria_kmedian
)
from .private_median import private_geometric_median, unit_gradient

__all__ = [
    'PrivacyBudget', 'BudgetTotal', 'BudgetLedger', 'SeededRng',
    'laplace_sample', 'laplace_noise', 'noisy_counts',
    'exponential_mechanism', 'gaussian_sigma',
    'BicriteriaResult', 'candidate_set', 'check_inside_ball', 'sphere_seeds', 'noisy_lloyd_centers',
    'private_bicriteria_solve', 'private_bicriteria_kmedian',
    'private_geometric_median', 'unit_gradient'
]
