"""
异常定义模块
库内所有可预期的失败都以这些异常抛出，CLI 据此映射退出码
"""

from typing import Optional


class ClusteringError(Exception):
    """聚类库异常基类"""


class ValidationError(ClusteringError, ValueError):
    """输入违反前置条件（维度不符、参数越界、实例过大等）"""


class DegenerateInstanceError(ClusteringError):
    """退化实例，流水线无法继续（空数据、噪声计数全为零）"""


class DatasetParseError(ValidationError):
    """数据文件解析失败，携带出错的文件行号（从1开始，0表示整个文件）"""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"第 {row} 行: {message}"
        super().__init__(message)
