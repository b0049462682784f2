"""恒定性检测：判断一个时变量是否实际上是常数"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import NonFiniteSampleError, NumericsError

logger = logging.getLogger(__name__)

DEFAULT_CONSTANCY_TOL = 1e-6


@dataclass(frozen=True)
class ConstancyReport:
    is_constant: bool
    mean: float
    max_deviation: float
    tol: float = DEFAULT_CONSTANCY_TOL
    samples: int = 0

    def __str__(self) -> str:
        flag = "constant" if self.is_constant else "varying"
        return f"{flag} mean={self.mean:.10g} max_deviation={self.max_deviation:.3e} tol={self.tol:.1e}"


def constancy(samples: Sequence[float], tol: float = DEFAULT_CONSTANCY_TOL) -> ConstancyReport:
    """样本均值与最大偏差；is_constant ⇔ max_deviation ≤ tol·(1+|mean|)"""
    values = np.asarray(samples, dtype=float).reshape(-1)
    if values.size < 2:
        raise NumericsError(f"恒定性检测至少需要 2 个样本，实际 {values.size} 个")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise NonFiniteSampleError(f"第 {int(bad[0])} 个样本非有限")

    mean = float(np.mean(values))
    max_dev = float(np.max(np.abs(values - mean)))
    report = ConstancyReport(max_dev <= tol * (1.0 + abs(mean)), mean, max_dev, tol, int(values.size))
    logger.debug(f"恒定性检测: {report}")
    return report


def max_drift(samples: Sequence[float]) -> float:
    """相对首个样本的最大漂移"""
    values = np.asarray(samples, dtype=float).reshape(-1)
    return float(np.max(np.abs(values - values[0])))
