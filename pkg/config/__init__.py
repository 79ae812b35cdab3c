"""配置模块"""

from .settings import ClusteringConfig, config

__all__ = ['ClusteringConfig', 'config']
