"""
私有 k-median 流水线
五个步骤：JL 投影并截断 → 私有双准则解 → 噪声计数 → 吸附后非私有求解 → 原空间逐簇私有中心恢复
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from config import config
from cover import build_thresholds
from dp import (
    PrivacyBudget, BudgetLedger, SeededRng,
    BicriteriaResult, noisy_counts, private_bicriteria_solve, private_geometric_median,
    check_inside_ball
)
from geometry import Dataset, CenterSet, assign, cost
from kmedian import SolverResult, local_search_kmedian
from monitor import RunMonitor
from utils.errors import ValidationError, DegenerateInstanceError, ClusteringError
from .projection import target_dimension, jl_project, clamp_radius, projected_norm_bound

# 预算账本中的阶段名
STAGE_BICRITERIA = "bicriteria"
STAGE_COUNTS = "noisy_counts"
STAGE_RECOVERY = "center_recovery"


def _default_split() -> Tuple[float, float, float]:
    return tuple(float(x) for x in config.BUDGET_SPLIT)


@dataclass
class PipelineConfig:
    """流水线参数"""
    k: int
    eps: float = 0.5
    d_prime_override: Optional[int] = None
    jl_constant: float = field(default_factory=lambda: float(config.JL_CONSTANT))
    budget_split: Tuple[float, float, float] = field(default_factory=_default_split)
    alpha_note: str = "单交换局部搜索，候选为吸附点"
    max_k_prime: int = field(default_factory=lambda: int(config.MAX_K_PRIME))
    max_candidates: int = field(default_factory=lambda: int(config.MAX_CANDIDATES))
    gm_steps: int = field(default_factory=lambda: int(config.GM_STEPS))

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k 必须为正，得到 {self.k}")
        if not (0 < self.eps <= 0.5):
            raise ValidationError(f"eps 必须在 (0, 1/2] 内，得到 {self.eps}")
        if not (self.jl_constant > 0):
            raise ValidationError(f"jl_constant 必须为正，得到 {self.jl_constant}")
        if self.d_prime_override is not None and self.d_prime_override < 1:
            raise ValidationError(f"d' 必须为正，得到 {self.d_prime_override}")
        split = tuple(float(x) for x in self.budget_split)
        if len(split) != 3 or any(not (x > 0) for x in split):
            raise ValidationError(f"budget_split 必须是三个正数，得到 {self.budget_split}")
        if abs(math.fsum(split) - 1.0) > 1e-12:
            raise ValidationError(f"budget_split 之和必须为 1，得到 {math.fsum(split)}")
        self.budget_split = split
        if self.max_k_prime < 1 or self.max_candidates < 1 or self.gm_steps < 1:
            raise ValidationError("max_k_prime、max_candidates、gm_steps 必须为正")

    def to_dict(self) -> Dict:
        return {
            'k': self.k,
            'eps': self.eps,
            'd_prime_override': self.d_prime_override,
            'jl_constant': self.jl_constant,
            'budget_split': list(self.budget_split),
            'alpha_note': self.alpha_note,
            'max_k_prime': self.max_k_prime,
            'max_candidates': self.max_candidates,
            'gm_steps': self.gm_steps
        }


@dataclass
class PipelineReport:
    """一次流水线运行的报告"""
    bicriteria_cost: float      # 投影空间中双准则解的代价
    snapped_cost: float         # 吸附实例上步骤4解的代价
    final_cost: float           # 原空间最终代价
    ledger: BudgetLedger
    d_prime: int
    k_prime: int
    k_prime_formula: int
    seed: int
    candidate_count: int = 0
    candidate_method: str = ""
    noisy_counts: List[int] = field(default_factory=list)
    stage_seconds: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        """转换为字典；挂钟时间放在 timing 下"""
        spent = self.ledger.total()
        return {
            'bicriteria_cost': self.bicriteria_cost,
            'snapped_cost': self.snapped_cost,
            'final_cost': self.final_cost,
            'ledger': self.ledger.to_records(),
            'ledger_total': {'eps_p': spent.eps_p, 'delta_p': spent.delta_p},
            'd_prime': self.d_prime,
            'k_prime': self.k_prime,
            # 公式值可能是极大整数，按字符串保存
            'k_prime_formula': str(self.k_prime_formula),
            'seed': self.seed,
            'candidate_count': self.candidate_count,
            'candidate_method': self.candidate_method,
            'noisy_counts': list(self.noisy_counts),
            'timing': dict(self.stage_seconds)
        }


def cluster_counts(owner: np.ndarray, weights: np.ndarray, k: int) -> np.ndarray:
    """每个中心的（带权）点数；删掉一个单位权重点至多改变一个计数 1"""
    return np.bincount(np.asarray(owner, dtype=int), weights=np.asarray(weights, dtype=float),
                       minlength=k)


def snap_and_weight(projected: Dataset, centers: CenterSet, counts) -> Dataset:
    """
    吸附：以中心为点、噪声计数为权重构造小规模带权实例，丢弃计数为零的中心

    Raises:
        DegenerateInstanceError: 所有计数为零
    """
    c = np.asarray(counts, dtype=float).reshape(-1)
    if c.shape[0] != centers.k:
        raise ValidationError(f"计数长度 {c.shape[0]} 与中心数 {centers.k} 不一致")
    if projected.dim != centers.dim:
        raise ValidationError(f"数据维度 {projected.dim} 与中心维度 {centers.dim} 不一致")
    if np.any(c < 0) or not np.all(np.isfinite(c)):
        raise ValidationError("计数必须是有限非负数")
    keep = c > 0
    if not np.any(keep):
        raise DegenerateInstanceError("噪声计数全为零，无法构造吸附实例")
    return Dataset.from_points(centers.centers[keep], c[keep], dim=centers.dim)


def k_prime_formula(k: int, eps: float, n: int, d_prime: int) -> int:
    """k * |T_est| * (2*ceil(sqrt(d')/(2eps)) + 1)^{d'}，T_est 取悲观的 R = 1/n"""
    thresholds = build_thresholds(1.0 / n, eps, n)
    per_axis = 2 * math.ceil(math.sqrt(d_prime) / (2 * eps)) + 1
    return k * len(thresholds) * per_axis ** d_prime


def _step4_candidates(snapped: Dataset, bicenters: CenterSet, counts: np.ndarray, k: int) -> CenterSet:
    """吸附点不足 k 个时，用计数为零的双准则中心补足候选"""
    if snapped.n >= k:
        return CenterSet.from_points(snapped.points, dim=snapped.dim)
    extra = bicenters.centers[np.asarray(counts) <= 0]
    logger.bind(stage="snap_solve").warning(
        f"吸附点只有 {snapped.n} 个，少于 k={k}，补入 {extra.shape[0]} 个零计数中心"
    )
    return CenterSet.from_points(np.vstack([snapped.points, extra]), dim=snapped.dim)


@dataclass
class PartitionResult:
    """步骤1至4的输出：投影数据、私有双准则解、噪声计数、吸附求解结果与点的分组"""
    projected: Dataset
    bicriteria: BicriteriaResult
    bicriteria_cost: float
    noisy: np.ndarray
    solved: SolverResult
    groups: np.ndarray
    d_prime: int
    k_prime_formula: int

    @property
    def k_solve(self) -> int:
        return self.solved.centers.k


def private_partition(data: Dataset, pipeline_config: PipelineConfig, budget: PrivacyBudget,
                      rng: SeededRng, ledger: BudgetLedger,
                      monitor: Optional[RunMonitor] = None) -> PartitionResult:
    """
    流水线步骤1至4：投影、私有双准则解、噪声计数、吸附后求解，按投影空间最近中心给原始点分组

    只花费 eps_p 的前两份（budget_split 的 s1、s2），不花 delta
    """
    cfg = pipeline_config
    monitor = monitor or RunMonitor()
    s1, s2, _ = cfg.budget_split
    k = cfg.k
    log = logger.bind(stage="pipeline")

    # 步骤1：投影
    with monitor.stage("projection"):
        d_prime = target_dimension(k, cfg.eps, data.dim, cfg.jl_constant, cfg.d_prime_override)
        projected = jl_project(data, d_prime, rng)
    ball = clamp_radius(data.n)

    # 步骤2：私有双准则解
    with monitor.stage("bicriteria"):
        formula = k_prime_formula(k, cfg.eps, data.n, d_prime)
        k_request = int(min(formula, cfg.max_k_prime))
        if k_request < formula:
            log.info(f"k' 公式值过大，截断为 {k_request}")
        bicriteria = private_bicriteria_solve(
            projected, k_request, PrivacyBudget(s1 * budget.eps_p, 0.0),
            ball, cfg.eps, rng, ledger=ledger, stage=STAGE_BICRITERIA,
            max_candidates=cfg.max_candidates,
            discovery_radius=projected_norm_bound(data.n, d_prime),
            cap_to_candidates=True
        )
        bicenters = bicriteria.centers
        bicriteria_cost = cost(projected, bicenters)

    # 步骤3：噪声计数
    with monitor.stage("noisy_counts"):
        owner = assign(projected, bicenters).owner
        exact = cluster_counts(owner, projected.weights, bicenters.k)
        noisy = noisy_counts(exact, s2 * budget.eps_p, rng)
        ledger.charge(STAGE_COUNTS, s2 * budget.eps_p, 0.0)

    # 步骤4：吸附后非私有求解
    with monitor.stage("snap_solve"):
        snapped = snap_and_weight(projected, bicenters, noisy)
        candidates = _step4_candidates(snapped, bicenters, noisy, k)
        k_solve = min(k, candidates.k)
        if k_solve < k:
            log.warning(f"候选只有 {candidates.k} 个，步骤4只求 {k_solve} 个中心")
        solved = local_search_kmedian(snapped, k_solve, candidates)
        groups = assign(projected, solved.centers).owner

    return PartitionResult(
        projected=projected,
        bicriteria=bicriteria,
        bicriteria_cost=bicriteria_cost,
        noisy=noisy,
        solved=solved,
        groups=groups,
        d_prime=d_prime,
        k_prime_formula=formula
    )


def run_pipeline(data: Dataset, pipeline_config: PipelineConfig, budget: PrivacyBudget,
                 rng: SeededRng, monitor: Optional[RunMonitor] = None
                 ) -> Tuple[CenterSet, PipelineReport]:
    """
    运行完整的私有 k-median 流水线

    Args:
        data: B(0,1) 内的原始数据
        pipeline_config: 流水线参数
        budget: 声明的 (eps_p, delta_p)，delta_p 必须为正
        rng: 本次运行唯一的随机流
        monitor: 阶段计时器，缺省新建

    Returns:
        (原空间中的 k 个中心, 运行报告)
    """
    if data.n == 0:
        raise DegenerateInstanceError("数据集为空")
    if budget.delta_p <= 0:
        raise ValidationError("流水线的中心恢复步骤需要 delta_p > 0")
    check_inside_ball(np.asarray(data.points), 1.0)

    cfg = pipeline_config
    monitor = monitor or RunMonitor()
    ledger = BudgetLedger()
    s3 = cfg.budget_split[2]
    log = logger.bind(stage="pipeline")

    part = private_partition(data, cfg, budget, rng, ledger, monitor)
    k_solve = part.k_solve

    # 步骤5：按投影空间归属划分原始数据，逐簇私有几何中位数
    with monitor.stage("center_recovery"):
        share = PrivacyBudget(s3 * budget.eps_p / k_solve, budget.delta_p / k_solve)
        recovered = []
        for j in range(k_solve):
            members = np.asarray(data.points)[part.groups == j]
            stage = f"{STAGE_RECOVERY}/{j}"
            if members.shape[0] == 0:
                log.warning(f"簇 {j} 为空，中心取原点")
                ledger.charge(stage, share.eps_p, share.delta_p)
                recovered.append(np.zeros(data.dim))
                continue
            recovered.append(private_geometric_median(
                members, share, 1.0, rng, steps=cfg.gm_steps, ledger=ledger, stage=stage
            ))
        final = CenterSet.from_points(np.vstack(recovered), dim=data.dim)
        final_cost = cost(data, final)

    if not ledger.within(budget):
        spent = ledger.total()
        raise ClusteringError(f"预算超支: 花费 ({spent.eps_p}, {spent.delta_p})，声明 {budget.to_dict()}")

    bicriteria = part.bicriteria
    report = PipelineReport(
        bicriteria_cost=part.bicriteria_cost,
        snapped_cost=part.solved.cost,
        final_cost=final_cost,
        ledger=ledger,
        d_prime=part.d_prime,
        k_prime=bicriteria.k_prime,
        k_prime_formula=part.k_prime_formula,
        seed=rng.seed,
        candidate_count=bicriteria.candidate_count,
        candidate_method=bicriteria.candidate_method,
        noisy_counts=[int(x) for x in part.noisy],
        stage_seconds=dict(monitor.stage_seconds)
    )
    log.info(
        f"流水线完成: d'={part.d_prime}, k'={bicriteria.k_prime}, "
        f"双准则 {part.bicriteria_cost:.4f}, 吸附 {part.solved.cost:.4f}, 最终 {final_cost:.4f}"
    )
    return final, report


def nonprivate_baseline(data: Dataset, k: int) -> float:
    """非私有基线：以数据点为候选的单交换局部搜索代价"""
    candidates = CenterSet.from_points(data.points, dim=data.dim)
    return local_search_kmedian(data, min(k, data.n), candidates).cost
