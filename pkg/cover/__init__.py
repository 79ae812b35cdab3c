"""阈值覆盖模块"""

from .threshold_cover import (
    ThresholdSet, CoverReport,
    build_thresholds, lattice_point_count, dedup_rows,
    threshold_cover, verify_cover_bound
)

__all__ = [
    'ThresholdSet', 'CoverReport',
    'build_thresholds', 'lattice_point_count', 'dedup_rows',
    'threshold_cover', 'verify_cover_bound'
]
