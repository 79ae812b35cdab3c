"""非私有 k-median 模块"""

from .solver_result import SolverResult
from .median import WeiszfeldResult, weiszfeld, geometric_median, median_objective, median_gradient
from .local_search import local_search_kmedian, greedy_init, swap_costs, nearest_two
from .oracles import exact_kmedian_oracle, exact_discrete_kmedian, set_partitions

__all__ = [
    'SolverResult',
    'WeiszfeldResult', 'weiszfeld', 'geometric_median', 'median_objective', 'median_gradient',
    'local_search_kmedian', 'greedy_init', 'swap_costs', 'nearest_two',
    'exact_kmedian_oracle', 'exact_discrete_kmedian', 'set_partitions'
]
