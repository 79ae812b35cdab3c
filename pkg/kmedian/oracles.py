"""
精确预言机模块
小规模实例上的暴力最优解，用作测试中的 OPT_k
"""

from itertools import combinations
from math import comb
from typing import Dict, Iterator, List, Tuple

import numpy as np
from loguru import logger

from config import config
from geometry import Dataset, CenterSet, distance_matrix, cost
from utils.errors import ValidationError
from .median import weiszfeld
from .solver_result import SolverResult

# 精确预言机内部 Weiszfeld 精度
_ORACLE_TOL = 1e-10
_ORACLE_MAX_ITER = 10000
# 单批距离张量元素数上限
_CHUNK_ELEMENTS = 4_000_000


def set_partitions(n: int, max_blocks: int) -> Iterator[List[int]]:
    """按字典序枚举受限增长串，即把 n 个元素划分为至多 max_blocks 个非空块"""
    labels = [0] * n

    def extend(i: int, used: int) -> Iterator[List[int]]:
        if i == n:
            yield labels
            return
        for b in range(min(used + 1, max_blocks)):
            labels[i] = b
            yield from extend(i + 1, max(used, b + 1))

    if n == 0:
        return
    yield from extend(1, 1)


def exact_kmedian_oracle(data: Dataset, k: int) -> SolverResult:
    """
    连续 k-median 精确解（枚举划分）

    每个块的 1-median 由 Weiszfeld 求得并按子集掩码缓存；
    返回代价是 OPT_k 的上界，误差在 1e-6 以内
    """
    n = data.n
    if k < 1:
        raise ValidationError(f"k 必须为正，得到 {k}")
    if n == 0:
        raise ValidationError("数据集为空")
    if n > config.EXACT_ORACLE_MAX_N or k > config.EXACT_ORACLE_MAX_K:
        raise ValidationError(
            f"实例过大: n={n}, k={k}（上限 n<={config.EXACT_ORACLE_MAX_N}, k<={config.EXACT_ORACLE_MAX_K}）"
        )
    if k >= n:
        centers = CenterSet.from_points(data.points, dim=data.dim)
        return SolverResult(centers=centers, cost=cost(data, centers), iterations=0, converged=True)

    X = np.asarray(data.points)
    w = np.asarray(data.weights)
    memo: Dict[int, Tuple[float, np.ndarray]] = {}

    def block(mask: int) -> Tuple[float, np.ndarray]:
        hit = memo.get(mask)
        if hit is None:
            idx = [i for i in range(n) if mask >> i & 1]
            res = weiszfeld(X[idx], w[idx], tol=_ORACLE_TOL, max_iter=_ORACLE_MAX_ITER)
            hit = (res.objective, res.median)
            memo[mask] = hit
        return hit

    best_cost = np.inf
    best_masks: List[int] = []
    evaluated = 0
    for labels in set_partitions(n, k):
        masks = [0] * (max(labels) + 1)
        for i, b in enumerate(labels):
            masks[b] |= 1 << i
        total = sum(block(m)[0] for m in masks)
        evaluated += 1
        if total < best_cost:
            best_cost = total
            best_masks = masks

    centers = CenterSet.from_points(np.array([block(m)[1] for m in best_masks]), dim=data.dim)
    final = cost(data, centers)
    logger.bind(stage="oracle").debug(
        f"精确预言机: n={n}, k={k}, 划分 {evaluated} 个, 子集 {len(memo)} 个, OPT≈{final:.8g}"
    )
    return SolverResult(centers=centers, cost=final, iterations=evaluated, converged=True)


def exact_discrete_kmedian(data: Dataset, candidates: CenterSet, k: int) -> SolverResult:
    """
    离散 k-median 精确解：穷举候选的所有 k 子集

    同代价时取字典序最小的子集
    """
    if k < 1 or k > candidates.k:
        raise ValidationError(f"k={k} 必须在 [1, {candidates.k}] 内")
    if data.n == 0:
        raise ValidationError("数据集为空")
    total = comb(candidates.k, k)
    if total > config.DISCRETE_ORACLE_BUDGET:
        raise ValidationError(f"组合数 C({candidates.k},{k})={total} 超过预算 {config.DISCRETE_ORACLE_BUDGET}")

    D = distance_matrix(data.points, candidates.centers)
    w = np.asarray(data.weights)
    combos = np.array(list(combinations(range(candidates.k), k)), dtype=int).reshape(-1, k)

    best_cost = np.inf
    best_index = 0
    step = max(1, _CHUNK_ELEMENTS // (data.n * k))
    for start in range(0, combos.shape[0], step):
        chunk = combos[start:start + step]
        # n × chunk × k -> chunk
        values = w @ D[:, chunk].min(axis=2)
        i = int(np.argmin(values))
        if values[i] < best_cost:
            best_cost = float(values[i])
            best_index = start + i

    centers = CenterSet.from_points(candidates.centers[combos[best_index]], dim=candidates.dim)
    return SolverResult(centers=centers, cost=cost(data, centers), iterations=int(total), converged=True)
