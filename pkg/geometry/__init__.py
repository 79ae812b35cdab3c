"""几何模块"""

from .metric import (
    Point, Dataset, CenterSet, Assignment,
    as_point, dist, distance_matrix, assign, cost,
    clamp_to_ball, clamp_rows_to_ball
)
from .lattice import (
    lattice_spacing, lattice_size_bound, lattice_offsets, cover_ball
)

__all__ = [
    'Point', 'Dataset', 'CenterSet', 'Assignment',
    'as_point', 'dist', 'distance_matrix', 'assign', 'cost',
    'clamp_to_ball', 'clamp_rows_to_ball',
    'lattice_spacing', 'lattice_size_bound', 'lattice_offsets', 'cover_ball'
]
