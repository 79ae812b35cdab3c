"""
阈值覆盖模块
由参考 k 中心解构造 k' 中心双准则解：对每个中心与几何增长阈值 t，
用半径 eps*t 的小球覆盖 B(c, t)，并把参考中心本身加入解中
"""

import math
from dataclasses import dataclass, asdict, field
from typing import Dict, List

import numpy as np
from loguru import logger

from config import config
from geometry import Dataset, CenterSet, cover_ball, distance_matrix, cost
from utils.errors import ValidationError

# 逐点界的比较容差
_POINT_TOL = 1e-9


@dataclass(frozen=True)
class ThresholdSet:
    """几何阈值序列 T = {eps*R, eps*R*(1+eps), ..., >= n*R}"""
    eps: float
    base_cost_R: float
    n: int
    thresholds: List[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.thresholds)

    @staticmethod
    def expected_size(eps: float, n: int) -> int:
        """R > 0 时的闭式长度 ceil(log_{1+eps}(n/eps)) + 1"""
        return math.ceil(math.log(n / eps) / math.log1p(eps)) + 1


@dataclass(frozen=True)
class CoverReport:
    """阈值覆盖代价界的校验结果"""
    cover_cost: float
    bound_3enR: float
    passed: bool
    size_S: int
    size_T: int
    R: float = 0.0
    eps: float = 0.0
    n: int = 0
    per_point_ok: bool = True
    max_point_ratio: float = 0.0

    def to_dict(self) -> Dict:
        """转换为字典"""
        return asdict(self)


def _check_eps(eps: float):
    if not (0 < eps <= 0.5):
        raise ValidationError(f"eps 必须在 (0, 1/2] 内，得到 {eps}")


def build_thresholds(R: float, eps: float, n: int) -> ThresholdSet:
    """
    构造阈值序列

    Args:
        R: 参考解的每点平均代价（总代价为 n*R）
        eps: 近似参数
        n: 点数

    Returns:
        从 eps*R 起按 (1+eps) 增长、截止于首个 >= n*R 元素的序列；R = 0 时为空
    """
    _check_eps(eps)
    if n < 1:
        raise ValidationError(f"n 必须为正整数，得到 {n}")
    if R < 0 or not math.isfinite(R):
        raise ValidationError(f"R 必须是有限非负数，得到 {R}")

    thresholds: List[float] = []
    if R > 0:
        top = n * R
        t = eps * R
        while t < top:
            thresholds.append(t)
            t = (1 + eps) * t
        thresholds.append(t)
    return ThresholdSet(eps=eps, base_cost_R=R, n=n, thresholds=thresholds)


def lattice_point_count(dim: int, eps: float) -> int:
    """
    单个 (中心, 阈值) 产生的格点数

    格距与半径都随 t 线性缩放，所以与 t 无关
    """
    _check_eps(eps)
    return cover_ball(np.zeros(dim), 1.0, eps).shape[0]


def dedup_rows(points: np.ndarray, tol: float = None) -> np.ndarray:
    """按 tol 量化去重，保留首次出现的顺序"""
    tol = config.DEDUP_TOL if tol is None else tol
    if points.shape[0] == 0:
        return points
    keys = np.round(points / tol)
    _, first = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(first)]


def threshold_cover(ref_centers: CenterSet, R: float, eps: float, n: int) -> CenterSet:
    """
    阈值覆盖构造

    Args:
        ref_centers: 参考 k 中心解
        R: 参考解在目标数据上的每点代价（由调用方给出）
        eps: 近似参数
        n: 点数

    Returns:
        S = ref_centers ∪ 各 (c, t) 的格点覆盖，去重后参考中心排在最前
    """
    T = build_thresholds(R, eps, n)
    if len(T) == 0:
        return ref_centers

    blocks = [ref_centers.centers]
    for c in ref_centers.centers:
        for t in T.thresholds:
            blocks.append(cover_ball(c, t, eps * t))
    S = dedup_rows(np.vstack(blocks))

    logger.bind(stage="cover").debug(
        f"阈值覆盖: k={ref_centers.k}, |T|={len(T)}, |S|={S.shape[0]}"
    )
    return CenterSet.from_points(S, dim=ref_centers.dim)


def _cover_scale(data: Dataset) -> int:
    """带权数据的 n 取总权重上取整"""
    return max(1, math.ceil(data.total_weight - 1e-9))


def verify_cover_bound(data: Dataset, ref_centers: CenterSet, S: CenterSet,
                       eps: float) -> CoverReport:
    """
    校验 cost(data, S) <= 3*n*eps*R 以及逐点界

    逐点界：d(p, O) = r > eps*R 的点满足 d(p, S) <= (1+eps)*eps*r；
    所有点满足 d(p, S) <= d(p, O)
    """
    _check_eps(eps)
    n = _cover_scale(data)
    ref_cost = cost(data, ref_centers)
    R = ref_cost / data.total_weight if data.total_weight > 0 else 0.0
    T = build_thresholds(R, eps, n)

    d_ref = distance_matrix(data.points, ref_centers.centers).min(axis=1)
    d_S = distance_matrix(data.points, S.centers).min(axis=1)
    cover_cost = float(np.dot(data.weights, d_S))
    bound = 3.0 * n * eps * R

    per_point_ok = bool(np.all(d_S <= d_ref + _POINT_TOL))
    far = d_ref > eps * R
    max_ratio = 0.0
    if np.any(far):
        allowed = (1 + eps) * eps * d_ref[far]
        ratios = d_S[far] / allowed
        max_ratio = float(ratios.max())
        per_point_ok = per_point_ok and bool(np.all(d_S[far] <= allowed + _POINT_TOL))

    report = CoverReport(
        cover_cost=cover_cost,
        bound_3enR=bound,
        passed=bool(cover_cost <= bound),
        size_S=S.k,
        size_T=len(T),
        R=R,
        eps=eps,
        n=n,
        per_point_ok=per_point_ok,
        max_point_ratio=max_ratio
    )
    if not report.passed or not report.per_point_ok:
        logger.bind(stage="cover").warning(f"覆盖界校验未通过: {report}")
    return report
