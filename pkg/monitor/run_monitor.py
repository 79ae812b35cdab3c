"""
运行监控模块
负责记录各阶段耗时、汇总重复实验结果
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from typing import Dict, Iterator, List, Optional

import pandas as pd
from loguru import logger


@dataclass
class RunRecord:
    """单次实验记录"""
    seed_key: str           # 种子及子流编号
    final_cost: float       # 私有解在原始数据上的代价
    baseline_cost: float    # 非私有局部搜索代价
    ratio: float            # final_cost / baseline_cost
    eps_spent: float        # 实际花费 eps
    delta_spent: float      # 实际花费 delta
    k_prime: int
    d_prime: int
    single_center_cost: float = 0.0  # 非私有 1-median 代价

    def to_dict(self) -> Dict:
        """转换为字典"""
        return asdict(self)


class RunMonitor:
    """运行监控器"""

    def __init__(self):
        self.stage_seconds: Dict[str, float] = {}
        self.records: List[RunRecord] = []

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """计时一个阶段，同名阶段累加"""
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self.stage_seconds[name] = self.stage_seconds.get(name, 0.0) + elapsed
            logger.bind(stage=name).debug(f"阶段 {name} 用时 {elapsed:.3f}s")

    def record(self, record: RunRecord):
        """记录一次实验"""
        self.records.append(record)
        logger.info(
            f"运行 {record.seed_key} | 代价 {record.final_cost:.4f} | "
            f"基线 {record.baseline_cost:.4f} | 比值 {record.ratio:.3f}"
        )

    def get_summary(self, ratio_threshold: Optional[float] = None) -> Dict:
        """汇总所有记录"""
        return summarize_records(self.records, ratio_threshold)


def summarize_records(records: List[RunRecord], ratio_threshold: Optional[float] = None) -> Dict:
    """用 DataFrame 汇总比值统计"""
    if not records:
        return {'runs': 0}

    df = pd.DataFrame([r.to_dict() for r in records])
    summary = {
        'runs': int(len(df)),
        'ratio_mean': float(df['ratio'].mean()),
        'ratio_median': float(df['ratio'].median()),
        'ratio_max': float(df['ratio'].max()),
        'final_cost_mean': float(df['final_cost'].mean()),
        'baseline_cost_mean': float(df['baseline_cost'].mean()),
        'eps_spent_max': float(df['eps_spent'].max()),
        'delta_spent_max': float(df['delta_spent'].max())
    }
    if ratio_threshold is not None:
        summary['ratio_threshold'] = ratio_threshold
        summary['fraction_within_threshold'] = float((df['ratio'] <= ratio_threshold).mean())
    summary['fraction_beats_single_center'] = float((df['final_cost'] < df['single_center_cost']).mean())
    return summary
