"""
数据加载模块
读取 CSV 点集（每行一个点，可选 weight 列），可选归一化到单位球并记录仿射变换
"""

import io
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from geometry import Dataset, CenterSet
from utils.errors import DatasetParseError

WEIGHT_COLUMN = "weight"


@dataclass(frozen=True)
class LoadedDataset:
    """加载结果：数据集及其到原始坐标的仿射变换 x = y * scale + shift"""
    dataset: Dataset
    shift: np.ndarray
    scale: float
    columns: List[str]
    path: str

    def to_original(self, centers) -> np.ndarray:
        """把归一化坐标下的中心映射回原始坐标"""
        m = centers.centers if isinstance(centers, CenterSet) else np.asarray(centers, dtype=float)
        return m * self.scale + self.shift


def _split(line: str) -> List[str]:
    return [field.strip() for field in line.split(',')]


def _is_header(fields: List[str]) -> bool:
    """首行存在非数值字段即视为表头"""
    values = pd.to_numeric(pd.Series(fields), errors='coerce')
    return bool(values.isna().any())


def _read_rows(path: str) -> Tuple[Optional[List[str]], List[int], List[str]]:
    """返回 (表头或 None, 数据行的文件行号, 数据行文本)"""
    if not os.path.isfile(path):
        raise DatasetParseError(f"文件不存在: {path}", row=0)
    with open(path, 'r', encoding='utf-8') as f:
        lines = f.read().splitlines()
    numbered = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not numbered:
        raise DatasetParseError("文件为空", row=0)

    header = None
    first_row, first_line = numbered[0]
    if _is_header(_split(first_line)):
        header = _split(first_line)
        numbered = numbered[1:]
        if not numbered:
            raise DatasetParseError("只有表头，没有数据行", row=first_row)

    width = len(header) if header is not None else len(_split(numbered[0][1]))
    for row, line in numbered:
        if len(_split(line)) != width:
            raise DatasetParseError(f"字段数 {len(_split(line))} 与期望 {width} 不一致", row=row)
    return header, [row for row, _ in numbered], [line for _, line in numbered]


def _parse_numeric(rows: List[int], body: List[str], width: int) -> np.ndarray:
    """用 pandas 解析数值，定位第一个非数值字段所在行"""
    frame = pd.read_csv(io.StringIO("\n".join(body)), header=None, dtype=str,
                        names=list(range(width)), skip_blank_lines=False, keep_default_na=False)
    values = frame.apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    matrix = values.to_numpy(dtype=float)
    bad = ~np.isfinite(matrix)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise DatasetParseError(f"第 {j + 1} 列不是有限数值: {frame.iat[i, j]!r}", row=rows[i])
    return matrix


def load_dataset(path: str, normalize: bool = False) -> LoadedDataset:
    """
    加载 CSV 数据集

    Args:
        path: 文件路径
        normalize: 是否平移到（带权）质心并把最大范数缩放为 1

    Returns:
        LoadedDataset

    Raises:
        DatasetParseError: 文件缺失、为空、行长度不一致或含非数值字段
    """
    header, rows, body = _read_rows(path)
    width = len(header) if header is not None else len(_split(body[0]))
    matrix = _parse_numeric(rows, body, width)

    columns = header if header is not None else [f"x{i}" for i in range(width)]
    lowered = [c.lower() for c in columns]
    weights = None
    if WEIGHT_COLUMN in lowered:
        j = lowered.index(WEIGHT_COLUMN)
        weights = matrix[:, j]
        if np.any(weights < 0):
            i = int(np.argmax(weights < 0))
            raise DatasetParseError("权重不能为负", row=rows[i])
        matrix = np.delete(matrix, j, axis=1)
        columns = [c for i, c in enumerate(columns) if i != j]
    if matrix.shape[1] == 0:
        raise DatasetParseError("没有坐标列", row=rows[0])

    shift = np.zeros(matrix.shape[1])
    scale = 1.0
    if normalize:
        w = np.ones(matrix.shape[0]) if weights is None else weights
        shift = np.average(matrix, axis=0, weights=w) if w.sum() > 0 else matrix.mean(axis=0)
        centered = matrix - shift
        radius = float(np.linalg.norm(centered, axis=1).max())
        scale = radius if radius > 0 else 1.0
        matrix = centered / scale

    dataset = Dataset.from_points(matrix, weights)
    logger.bind(stage="load").info(
        f"加载 {path}: n={dataset.n}, d={dataset.dim}, 带权={weights is not None}, 归一化={normalize}"
    )
    return LoadedDataset(dataset=dataset, shift=shift, scale=scale, columns=columns, path=path)
