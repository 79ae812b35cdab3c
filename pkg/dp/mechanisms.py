"""
差分隐私机制模块
Laplace 机制、噪声计数、指数机制与高斯机制校准
"""

import math
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from utils.errors import ValidationError
from .rng import SeededRng


def _laplace_from_uniform(u: np.ndarray, scale: float) -> np.ndarray:
    """逆 CDF：v = u - 1/2, x = -b * sign(v) * ln(1 - 2|v|)"""
    v = u - 0.5
    return -scale * np.sign(v) * np.log1p(-2.0 * np.abs(v))


def laplace_sample(scale: float, rng: SeededRng) -> float:
    """
    一次 Laplace(0, scale) 抽样（逆 CDF，一次均匀抽样）

    均值 0，方差 2*scale^2
    """
    if not scale > 0:
        raise ValidationError(f"Laplace 尺度必须为正，得到 {scale}")
    while True:
        u = rng.uniform()
        # u = 0 时 ln(0) 发散，重抽
        if u > 0.0:
            return float(_laplace_from_uniform(np.float64(u), scale))


def laplace_noise(scale: float, size: int, rng: SeededRng) -> np.ndarray:
    """向量化 Laplace 噪声"""
    if not scale > 0:
        raise ValidationError(f"Laplace 尺度必须为正，得到 {scale}")
    u = rng.uniforms(size)
    bad = u <= 0.0
    while np.any(bad):
        u[bad] = rng.uniforms(int(bad.sum()))
        bad = u <= 0.0
    return _laplace_from_uniform(u, scale)


def noisy_counts(counts: Sequence[float], eps: float, rng: SeededRng) -> np.ndarray:
    """
    Laplace 机制计数

    每个计数的敏感度为 1（一个人只改变一个计数 1），加 Laplace(1/eps) 后四舍五入并截断到 0
    """
    if not eps > 0:
        raise ValidationError(f"eps 必须为正，得到 {eps}")
    c = np.asarray(counts, dtype=float).reshape(-1)
    if c.size == 0:
        return np.zeros(0, dtype=np.int64)
    noisy = c + laplace_noise(1.0 / eps, c.shape[0], rng)
    return np.maximum(np.rint(noisy), 0).astype(np.int64)


def exponential_mechanism(scores: Sequence[float], sensitivity: float, eps: float,
                          rng: SeededRng, log_prior: Optional[Sequence[float]] = None) -> int:
    """
    指数机制

    以正比于 prior * exp(eps * score / (2 * sensitivity)) 的概率抽取下标；
    prior 是与数据无关的基础测度（以对数给出，缺省为均匀），先减去最大对数权重保证数值稳定
    """
    s = np.asarray(scores, dtype=float).reshape(-1)
    if s.size == 0:
        raise ValidationError("指数机制需要非空候选")
    if not np.all(np.isfinite(s)):
        raise ValidationError("分数必须全部有限")
    if not sensitivity > 0:
        raise ValidationError(f"敏感度必须为正，得到 {sensitivity}")
    if eps < 0:
        raise ValidationError(f"eps 不能为负，得到 {eps}")

    logits = eps * s / (2.0 * sensitivity)
    if log_prior is not None:
        prior = np.asarray(log_prior, dtype=float).reshape(-1)
        if prior.shape != s.shape or not np.all(np.isfinite(prior)):
            raise ValidationError("基础测度必须与分数等长且全部有限")
        logits = logits + prior
    weights = np.exp(logits - logits.max())
    cumulative = np.cumsum(weights)
    u = rng.uniform() * cumulative[-1]
    index = int(np.searchsorted(cumulative, u, side='right'))
    return min(index, s.size - 1)


def gaussian_sigma(sensitivity: float, eps: float, delta: float) -> float:
    """经典高斯机制：sigma = Δ * sqrt(2 ln(1.25/δ)) / ε，只在 ε < 1 时有保证"""
    if not eps > 0:
        raise ValidationError(f"eps 必须为正，得到 {eps}")
    if not (0 < delta < 1):
        raise ValidationError(f"高斯机制需要 delta 在 (0, 1) 内，得到 {delta}")
    if eps >= 1:
        logger.warning(f"高斯机制单步 eps={eps:.4g} >= 1，经典校准在此范围没有 (eps, delta) 保证")
    return sensitivity * math.sqrt(2.0 * math.log(1.25 / delta)) / eps
