"""测试共用夹具"""

import os

import numpy as np
import pytest

from dp import SeededRng
from geometry import Dataset

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "fixtures")


def random_instance(seed: int, n: int, dim: int, scale: float = 1.0) -> Dataset:
    """立方体 [-scale, scale]^d 内的随机点"""
    gen = np.random.default_rng(seed)
    return Dataset.from_points(gen.uniform(-scale, scale, size=(n, dim)))


@pytest.fixture
def make_rng():
    return lambda seed=0: SeededRng(seed)


@pytest.fixture
def twelve_points_csv():
    return os.path.join(FIXTURE_DIR, "twelve_points.csv")


@pytest.fixture
def line_four():
    return Dataset.from_points([[0.0], [1.0], [10.0], [11.0]])


@pytest.fixture
def square_corners():
    return Dataset.from_points([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
