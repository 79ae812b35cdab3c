"""
度量基础模块
点、数据集、中心集合、距离与 k-median 代价计算
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial.distance import cdist

from utils.errors import ValidationError

# 点即一维浮点数组
Point = np.ndarray

ArrayLike = Union[Sequence[float], Sequence[Sequence[float]], np.ndarray]


def as_point(coords: ArrayLike) -> Point:
    """把坐标转换为点，校验有限性与维度"""
    p = np.asarray(coords, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1 or p.shape[0] < 1:
        raise ValidationError(f"点必须是非空一维坐标，得到形状 {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValidationError("点坐标必须全部有限")
    return p


def _as_matrix(rows: ArrayLike, dim: Optional[int], what: str) -> np.ndarray:
    m = np.array(rows, dtype=float)
    if m.size == 0:
        if dim is None:
            raise ValidationError(f"空{what}必须显式给出维度")
        return np.zeros((0, dim))
    if m.ndim == 1:
        # 一维输入视为一维空间中的若干点
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[1] < 1:
        raise ValidationError(f"{what}必须是 n×d 矩阵，得到形状 {m.shape}")
    if dim is not None and m.shape[1] != dim:
        raise ValidationError(f"{what}维度 {m.shape[1]} 与声明维度 {dim} 不一致")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{what}坐标必须全部有限")
    return m


@dataclass(frozen=True)
class Dataset:
    """带权数据集：n 个 d 维点及其非负重数"""
    points: np.ndarray
    weights: np.ndarray
    dim: int

    @classmethod
    def from_points(cls, points: ArrayLike, weights: Optional[Sequence[float]] = None,
                    dim: Optional[int] = None) -> 'Dataset':
        """构造并校验数据集，权重默认为 1"""
        m = _as_matrix(points, dim, "数据集")
        n = m.shape[0]
        if weights is None:
            w = np.ones(n)
        else:
            w = np.array(weights, dtype=float).reshape(-1)
            if w.shape[0] != n:
                raise ValidationError(f"权重长度 {w.shape[0]} 与点数 {n} 不一致")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise ValidationError("权重必须是有限非负数")
            if n > 0 and w.sum() <= 0:
                raise ValidationError("非空数据集的总权重必须为正")
        m.setflags(write=False)
        w.setflags(write=False)
        return cls(points=m, weights=w, dim=m.shape[1])

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class CenterSet:
    """有序中心集合"""
    centers: np.ndarray
    dim: int

    @classmethod
    def from_points(cls, centers: ArrayLike, dim: Optional[int] = None) -> 'CenterSet':
        m = _as_matrix(centers, dim, "中心集合")
        m.setflags(write=False)
        return cls(centers=m, dim=m.shape[1])

    @property
    def k(self) -> int:
        return int(self.centers.shape[0])

    def __len__(self) -> int:
        return self.k

    def __getitem__(self, index) -> Point:
        return self.centers[index]


@dataclass(frozen=True)
class Assignment:
    """每个点的归属中心及各中心的权重和"""
    owner: np.ndarray
    per_center_count: np.ndarray
    distances: np.ndarray = field(repr=False)


def dist(p: ArrayLike, q: ArrayLike) -> float:
    """欧氏距离"""
    a = as_point(p)
    b = as_point(q)
    if a.shape != b.shape:
        raise ValidationError(f"维度不一致: {a.shape[0]} vs {b.shape[0]}")
    return float(np.linalg.norm(a - b))


def distance_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """n×k 距离矩阵"""
    if points.shape[1] != centers.shape[1]:
        raise ValidationError(f"维度不一致: {points.shape[1]} vs {centers.shape[1]}")
    if points.shape[0] == 0 or centers.shape[0] == 0:
        return np.zeros((points.shape[0], centers.shape[0]))
    return cdist(points, centers)


def _check_pair(data: Dataset, centers: CenterSet):
    if centers.k == 0:
        raise ValidationError("中心集合为空，无法计算代价")
    if data.dim != centers.dim:
        raise ValidationError(f"数据维度 {data.dim} 与中心维度 {centers.dim} 不一致")


def assign(data: Dataset, centers: CenterSet) -> Assignment:
    """
    把每个点分配到最近中心

    距离相同时取下标最小的中心（argmin 返回首个最小值）
    """
    _check_pair(data, centers)
    dmat = distance_matrix(data.points, centers.centers)
    if data.n == 0:
        owner = np.zeros(0, dtype=int)
        nearest = np.zeros(0)
    else:
        owner = np.argmin(dmat, axis=1)
        nearest = dmat[np.arange(data.n), owner]
    counts = np.bincount(owner, weights=data.weights, minlength=centers.k).astype(float)
    return Assignment(owner=owner, per_center_count=counts, distances=nearest)


def cost(data: Dataset, centers: CenterSet) -> float:
    """k-median 代价：sum_i w_i * min_c d(p_i, c)，固定顺序求和"""
    a = assign(data, centers)
    return float(np.dot(data.weights, a.distances))


def clamp_to_ball(p: ArrayLike, radius: float) -> Point:
    """径向投影到球 B(0, radius)"""
    if radius <= 0:
        raise ValidationError("半径必须为正")
    x = as_point(p)
    norm = float(np.linalg.norm(x))
    if norm <= radius:
        return x
    return x * (radius / norm)


def clamp_rows_to_ball(points: np.ndarray, radius: float) -> np.ndarray:
    """逐行径向投影，返回新数组"""
    if radius <= 0:
        raise ValidationError("半径必须为正")
    norms = np.linalg.norm(points, axis=1)
    scale = np.ones_like(norms)
    outside = norms > radius
    scale[outside] = radius / norms[outside]
    return points * scale[:, None]
