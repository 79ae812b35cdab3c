"""
随机数模块
一次运行的全部随机性都来自同一个带种子的 numpy Generator
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from utils.errors import ValidationError


@dataclass
class SeededRng:
    """带种子的随机流；相同 (seed, key) 产生相同序列"""
    seed: int
    key: Tuple[int, ...] = ()
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ValidationError(f"seed 必须是 64 位无符号整数，得到 {self.seed}")
        self.seed = int(self.seed)
        sequence = np.random.SeedSequence(self.seed, spawn_key=tuple(self.key))
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def spawn(self, index: int) -> 'SeededRng':
        """由 (seed, key, index) 确定性派生的独立子流"""
        return SeededRng(self.seed, tuple(self.key) + (int(index),))

    def uniform(self) -> float:
        """[0, 1) 上的一次均匀抽样"""
        return float(self.generator.random())

    def uniforms(self, size) -> np.ndarray:
        return self.generator.random(size)

    def normal(self, scale: float, size) -> np.ndarray:
        return self.generator.normal(0.0, scale, size)

    def standard_normal(self, size) -> np.ndarray:
        return self.generator.standard_normal(size)
