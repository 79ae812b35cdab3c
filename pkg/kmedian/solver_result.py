"""求解结果数据类"""

from dataclasses import dataclass
from typing import Dict

from geometry import CenterSet


@dataclass(frozen=True)
class SolverResult:
    """k-median 求解结果，cost 与 cost(data, centers) 一致"""
    centers: CenterSet
    cost: float
    iterations: int = 0
    converged: bool = True

    def to_dict(self) -> Dict:
        """转换为字典"""
        return {
            'centers': self.centers.centers.tolist(),
            'cost': self.cost,
            'iterations': self.iterations,
            'converged': self.converged
        }
