"""数据模块"""

from .dataset_loader import LoadedDataset, load_dataset, WEIGHT_COLUMN
from .synthetic import mixture_centers, separated_mixture, uniform_ball

__all__ = [
    'LoadedDataset',
    'load_dataset',
    'WEIGHT_COLUMN',
    'mixture_centers',
    'separated_mixture',
    'uniform_ball'
]
