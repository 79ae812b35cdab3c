"""
隐私预算模块
(eps_p, delta_p) 预算与基本组合（逐分量求和）记账
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from loguru import logger

from utils.errors import ValidationError


@dataclass(frozen=True)
class PrivacyBudget:
    """(eps_p, delta_p) 差分隐私预算"""
    eps_p: float
    delta_p: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.eps_p) and self.eps_p > 0):
            raise ValidationError(f"eps_p 必须为正，得到 {self.eps_p}")
        if not (0 <= self.delta_p < 1):
            raise ValidationError(f"delta_p 必须在 [0, 1) 内，得到 {self.delta_p}")

    def scaled(self, eps_fraction: float, delta_fraction: float = None) -> 'PrivacyBudget':
        """按比例切分预算，delta 比例缺省与 eps 相同"""
        if delta_fraction is None:
            delta_fraction = eps_fraction
        return PrivacyBudget(self.eps_p * eps_fraction, self.delta_p * delta_fraction)

    def to_dict(self) -> Dict:
        return {'eps_p': self.eps_p, 'delta_p': self.delta_p}


@dataclass(frozen=True)
class BudgetTotal:
    """账本汇总值；与声明预算不同，允许为 0"""
    eps_p: float = 0.0
    delta_p: float = 0.0

    def to_dict(self) -> Dict:
        return {'eps_p': self.eps_p, 'delta_p': self.delta_p}


@dataclass
class BudgetLedger:
    """预算账本，记录每个阶段实际花费的预算"""
    entries: List[Tuple[str, PrivacyBudget]] = field(default_factory=list)

    def charge(self, stage: str, eps: float, delta: float = 0.0) -> PrivacyBudget:
        """记一笔花费"""
        spent = PrivacyBudget(eps, delta)
        self.entries.append((stage, spent))
        logger.bind(stage=stage).debug(f"预算记账 {stage}: eps={eps:.6g}, delta={delta:.3g}")
        return spent

    def total(self) -> BudgetTotal:
        """基本组合下的总花费"""
        return BudgetTotal(
            math.fsum(b.eps_p for _, b in self.entries),
            math.fsum(b.delta_p for _, b in self.entries)
        )

    def stage_total(self, prefix: str) -> BudgetTotal:
        """名称以 prefix 开头的阶段花费之和"""
        picked = [b for name, b in self.entries if name == prefix or name.startswith(prefix + "/")]
        return BudgetTotal(math.fsum(b.eps_p for b in picked), math.fsum(b.delta_p for b in picked))

    def within(self, budget: PrivacyBudget, rel_tol: float = 1e-12) -> bool:
        """总花费是否逐分量不超过声明预算（允许浮点求和误差）"""
        spent = self.total()
        return (spent.eps_p <= budget.eps_p * (1 + rel_tol)
                and spent.delta_p <= budget.delta_p * (1 + rel_tol) + 1e-300)

    def to_records(self) -> List[Dict]:
        """转换为记录列表"""
        return [{'stage': name, 'eps_p': b.eps_p, 'delta_p': b.delta_p} for name, b in self.entries]

    def __len__(self) -> int:
        return len(self.entries)
