"""私有 k-median 流水线模块"""

from .projection import target_dimension, clamp_radius, projected_norm_bound, gaussian_matrix, jl_project
from .runner import (
    PipelineConfig, PipelineReport, PartitionResult,
    cluster_counts, snap_and_weight, k_prime_formula,
    private_partition, run_pipeline, nonprivate_baseline
)

__all__ = [
    'target_dimension', 'clamp_radius', 'projected_norm_bound', 'gaussian_matrix', 'jl_project',
    'PipelineConfig', 'PipelineReport', 'PartitionResult',
    'cluster_counts', 'snap_and_weight', 'k_prime_formula',
    'private_partition', 'run_pipeline', 'nonprivate_baseline'
]
