"""
私有双准则 k-median 模块
候选中心集上的指数机制局部搜索：Laplace 噪声直方图初始化 + 指数机制单交换；
高维时候选集由与数据无关的径向抽样加上私有 Lloyd 迭代发现的簇心组成
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from loguru import logger

from config import config
from cover import dedup_rows
from geometry import (
    Dataset, CenterSet, cover_ball, lattice_size_bound, distance_matrix, clamp_rows_to_ball
)
from kmedian import swap_costs
from utils.errors import ValidationError
from .budget import PrivacyBudget, BudgetLedger
from .mechanisms import laplace_noise, noisy_counts, exponential_mechanism
from .rng import SeededRng

# 球内前置条件的相对容差
_BALL_SLACK = 1e-9


@dataclass(frozen=True)
class BicriteriaResult:
    """私有双准则求解的完整输出"""
    centers: CenterSet
    candidate_count: int
    candidate_method: str
    k_prime: int
    swap_steps: int
    swaps_taken: int
    seed_count: int = 0


def check_inside_ball(points: np.ndarray, ball_radius: float, what: str = "数据"):
    """校验所有点位于 B(0, ball_radius) 内"""
    if ball_radius <= 0:
        raise ValidationError(f"球半径必须为正，得到 {ball_radius}")
    if points.shape[0] == 0:
        return
    worst = float(np.linalg.norm(points, axis=1).max())
    if worst > ball_radius * (1 + _BALL_SLACK):
        raise ValidationError(f"{what}超出球 B(0, {ball_radius:.6g})，最大范数 {worst:.6g}")


def _refine_towards_origin(points: np.ndarray, ball_radius: float, eps: float, dim: int,
                           max_candidates: int) -> np.ndarray:
    """逐层加入 cover_ball(0, R/2^j, eps*R/2^j/4)，总数超过上限即停止"""
    origin = np.zeros(dim)
    for j in range(1, config.CANDIDATE_SCALES + 1):
        radius = ball_radius / 2 ** j
        merged = dedup_rows(np.vstack([points, cover_ball(origin, radius, eps * radius / 4.0)]))
        if merged.shape[0] > max_candidates:
            break
        points = merged
    return points


def _unit_directions(count: int, dim: int, rng: SeededRng) -> np.ndarray:
    directions = rng.standard_normal((count, dim))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1.0
    return directions / norms[:, None]


def sphere_seeds(count: int, radius: float, dim: int, rng: SeededRng) -> np.ndarray:
    """球面 S(0, radius) 上方向均匀的 count 个种子，与数据无关"""
    if count < 1 or not radius > 0:
        raise ValidationError(f"种子数和半径必须为正，得到 {count}, {radius}")
    return radius * _unit_directions(count, dim, rng)


def candidate_set(ball_radius: float, eps: float, dim: int, rng: SeededRng,
                  max_candidates: Optional[int] = None) -> Tuple[CenterSet, str]:
    """
    与数据无关的候选中心集

    细覆盖 cover_ball(0, R, eps*R/4) 并上粗覆盖 cover_ball(0, R, eps*R)，
    容量允许时再向原点逐层加密（半径减半的同形覆盖）；
    格点数超过 max_candidates 时改用带种子的球内抽样：原点加上 r*u，
    u 为球面均匀方向，r = R * 2^(-U*CANDIDATE_SCALES) 在对数尺度上均匀，U ~ U[0,1)

    Returns:
        (候选集, "lattice" 或 "sampled")
    """
    max_candidates = config.MAX_CANDIDATES if max_candidates is None else max_candidates
    fine = eps * ball_radius / 4.0
    coarse = eps * ball_radius
    origin = np.zeros(dim)

    if lattice_size_bound(ball_radius, fine, dim) <= config.LATTICE_BUILD_LIMIT:
        points = dedup_rows(np.vstack([
            cover_ball(origin, ball_radius, fine),
            cover_ball(origin, ball_radius, coarse)
        ]))
        if points.shape[0] <= max_candidates:
            points = _refine_towards_origin(points, ball_radius, eps, dim, max_candidates)
            return CenterSet.from_points(points, dim=dim), "lattice"

    count = max(1, max_candidates - 1)
    radii = ball_radius * np.exp2(-config.CANDIDATE_SCALES * rng.uniforms(count))
    sampled = _unit_directions(count, dim, rng) * radii[:, None]
    logger.bind(stage="bicriteria").info(
        f"格点候选过多（d={dim}），改用 {count + 1} 个球内抽样候选"
    )
    return CenterSet.from_points(np.vstack([origin, sampled]), dim=dim), "sampled"


def noisy_lloyd_centers(data: Dataset, seeds: np.ndarray, radius: float, eps: float,
                        rng: SeededRng, rounds: Optional[int] = None) -> np.ndarray:
    """
    私有 Lloyd 迭代

    点先径向截断到 B(0, radius)。每轮把点分给最近的簇心，各簇的计数与坐标和加 Laplace 噪声：
    一个单位权重的点至多改变一个计数 1、一个坐标和 sqrt(d)*radius（L1），
    每轮预算 eps/rounds，整个过程满足 eps-DP。
    噪声计数低于 LLOYD_MIN_COUNT_SCALES 倍 Laplace 尺度的簇心本轮不动，
    其余簇心更新为 噪声和/噪声计数 并截断回 B(0, radius)

    Args:
        data: 数据集
        seeds: 初始簇心（与数据无关）
        radius: 截断半径
        eps: 总预算
        rng: 随机流
        rounds: 轮数，缺省 LLOYD_ROUNDS

    Returns:
        与 seeds 同形的簇心
    """
    rounds = config.LLOYD_ROUNDS if rounds is None else rounds
    if rounds < 1:
        raise ValidationError(f"Lloyd 轮数必须为正，得到 {rounds}")
    if not eps > 0 or not radius > 0:
        raise ValidationError(f"eps 与半径必须为正，得到 {eps}, {radius}")
    centers = np.array(seeds, dtype=float)
    if centers.ndim != 2 or centers.shape[1] != data.dim or centers.shape[0] == 0:
        raise ValidationError(f"初始簇心必须是非空 k×{data.dim} 矩阵")

    X = clamp_rows_to_ball(np.asarray(data.points), radius)
    w = np.asarray(data.weights)
    count, dim = centers.shape
    scale = (1.0 + math.sqrt(dim) * radius) / (eps / rounds)
    floor = config.LLOYD_MIN_COUNT_SCALES * scale
    log = logger.bind(stage="bicriteria")

    for r in range(rounds):
        owner = np.argmin(distance_matrix(X, centers), axis=1)
        sums = np.zeros_like(centers)
        np.add.at(sums, owner, X * w[:, None])
        counts = np.bincount(owner, weights=w, minlength=count) + laplace_noise(scale, count, rng)
        sums += laplace_noise(scale, count * dim, rng).reshape(count, dim)
        live = counts >= floor
        if np.any(live):
            centers[live] = clamp_rows_to_ball(sums[live] / counts[live, None], radius)
        log.debug(f"私有 Lloyd 第 {r + 1} 轮: 更新 {int(live.sum())}/{count} 个簇心, Laplace 尺度 {scale:.4g}")
    return centers


def _swap_log_prior(pair_count: int, steps: int) -> np.ndarray:
    """“保持”占 1-q、每个交换占 q/pair_count 的基础测度，q = SWAP_KEEP_PRIOR/steps"""
    q = config.SWAP_KEEP_PRIOR / steps
    return np.concatenate([[math.log1p(-q)], np.full(pair_count, math.log(q / pair_count))])


def private_bicriteria_solve(data: Dataset, k_prime: int, budget: PrivacyBudget,
                             ball_radius: float, eps: float, rng: SeededRng,
                             ledger: Optional[BudgetLedger] = None,
                             stage: str = "bicriteria",
                             max_candidates: Optional[int] = None,
                             discovery_radius: Optional[float] = None,
                             cap_to_candidates: bool = False) -> BicriteriaResult:
    """
    私有双准则求解

    格点候选时，预算一半用于初始化（最近候选计数的 Laplace 直方图，取噪声计数最大的 k' 个候选），
    另一半平均分给 S = SWAP_ROUNDS_PER_CENTER * k' 步指数机制交换；
    每步分数为 -cost，敏感度 2*ball_radius，候选项包含“保持当前解”。

    抽样候选时，先用 DISCOVERY_FRACTION 的预算从 B(0, discovery_radius) 球面种子出发做私有 Lloyd，
    发现的簇心并入候选集；剩余预算仍由初始化与交换平分，交换的基础测度偏向“保持”

    Args:
        discovery_radius: 种子球面与 Lloyd 截断半径，缺省为 ball_radius
        cap_to_candidates: k' 超过候选数时降为候选数（记警告）而不是报错

    Raises:
        ValidationError: 参数非法、数据超出球，或 k' 超过候选数且未允许截断
    """
    if k_prime < 1:
        raise ValidationError(f"k' 必须为正，得到 {k_prime}")
    if not (0 < eps <= 0.5):
        raise ValidationError(f"eps 必须在 (0, 1/2] 内，得到 {eps}")
    if data.n == 0:
        raise ValidationError("数据集为空")
    check_inside_ball(data.points, ball_radius)
    log = logger.bind(stage=stage)
    max_candidates = config.MAX_CANDIDATES if max_candidates is None else max_candidates

    candidates, method = candidate_set(ball_radius, eps, data.dim, rng, max_candidates)
    eps_discovery = 0.0
    seed_count = 0
    if method == "sampled":
        radius = min(ball_radius, discovery_radius or ball_radius)
        seed_count = max(1, max_candidates // 2)
        eps_discovery = config.DISCOVERY_FRACTION * budget.eps_p
        discovered = noisy_lloyd_centers(
            data, sphere_seeds(seed_count, radius, data.dim, rng), radius, eps_discovery, rng
        )
        if ledger is not None:
            ledger.charge(f"{stage}/discovery", eps_discovery, 0.0)
        candidates = CenterSet.from_points(
            np.vstack([discovered, candidates.centers[:max_candidates - seed_count]]), dim=data.dim
        )

    if k_prime > candidates.k:
        if not cap_to_candidates:
            raise ValidationError(f"k'={k_prime} 超过候选数 {candidates.k}")
        log.warning(f"k'={k_prime} 超过候选数 {candidates.k}，降为 {candidates.k}")
    k_eff = min(k_prime, candidates.k)

    D = distance_matrix(data.points, candidates.centers)
    w = np.asarray(data.weights)

    # 初始化：最近候选的计数直方图，一个点只影响一个计数
    eps_init = (budget.eps_p - eps_discovery) / 2.0
    cells = np.bincount(np.argmin(D, axis=1), weights=w, minlength=candidates.k)
    noisy = noisy_counts(cells, eps_init, rng)
    order = np.lexsort((np.arange(candidates.k), -noisy))
    chosen = np.array(order[:k_eff], dtype=int)
    if ledger is not None:
        ledger.charge(f"{stage}/init", eps_init, 0.0)

    # 指数机制交换
    steps = config.SWAP_ROUNDS_PER_CENTER * k_eff
    eps_swaps = (budget.eps_p - eps_discovery) / 2.0
    eps_step = eps_swaps / steps
    sensitivity = 2.0 * ball_radius
    taken = 0
    for _ in range(steps):
        current = float(w @ D[:, chosen].min(axis=1))
        table = swap_costs(D, w, chosen)
        valid = np.ones(candidates.k, dtype=bool)
        valid[chosen] = False
        pairs = np.argwhere(np.broadcast_to(valid, table.shape))
        scores = np.concatenate([[-current], -table[pairs[:, 0], pairs[:, 1]]])
        prior = None
        if method == "sampled" and pairs.shape[0] > 0:
            prior = _swap_log_prior(pairs.shape[0], steps)
        pick = exponential_mechanism(scores, sensitivity, eps_step, rng, log_prior=prior)
        if pick > 0:
            j, c = pairs[pick - 1]
            chosen[j] = c
            taken += 1
    if ledger is not None:
        ledger.charge(f"{stage}/swaps", eps_swaps, 0.0)

    centers = CenterSet.from_points(candidates.centers[chosen], dim=data.dim)
    log.debug(
        f"双准则: k'={k_eff}, 候选 {candidates.k}（{method}）, 交换步 {steps}, 实际交换 {taken}"
    )
    return BicriteriaResult(
        centers=centers,
        candidate_count=candidates.k,
        candidate_method=method,
        k_prime=k_eff,
        swap_steps=steps,
        swaps_taken=taken,
        seed_count=seed_count
    )


def private_bicriteria_kmedian(data: Dataset, k_prime: int, budget: PrivacyBudget,
                               ball_radius: float, eps: float, rng: SeededRng,
                               ledger: Optional[BudgetLedger] = None) -> CenterSet:
    """私有双准则 k-median，返回恰好 k' 个取自候选集的中心"""
    return private_bicriteria_solve(data, k_prime, budget, ball_radius, eps, rng, ledger).centers
