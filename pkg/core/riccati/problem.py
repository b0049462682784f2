"""Riccati 问题与可积性判据结果的数据类型"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError, PreconditionError
from core.exprfn import TimeExpr, as_expr, sqrt
from core.numerics import ConstancyReport
from core.sl2 import GaugeCurve, Sl2Coeffs


@dataclass(frozen=True)
class RiccatiProblem:
    """ẋ = b₀ + b₁x + b₂x²，x(t0) = x0，x0 可以是 ±∞"""

    coeffs: Sl2Coeffs
    x0: float
    interval: Tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        t0, t1 = (float(v) for v in self.interval)
        if not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
            raise ConfigError(f"区间无效: [{t0}, {t1}]")
        if math.isnan(float(self.x0)):
            raise ConfigError("初值不能为 NaN")
        object.__setattr__(self, 'interval', (t0, t1))
        object.__setattr__(self, 'x0', float(self.x0))

    @property
    def t0(self) -> float:
        return self.interval[0]

    @property
    def t1(self) -> float:
        return self.interval[1]

    def grid(self, points: int) -> np.ndarray:
        return np.linspace(self.t0, self.t1, points)

    def check_evaluable(self, grid: Optional[Sequence[float]] = None) -> None:
        """系数在网格上必须有限"""
        grid = self.grid(50) if grid is None else grid
        values = self.coeffs.sample(grid)
        if not np.all(np.isfinite(values)):
            bad = float(np.asarray(grid)[~np.all(np.isfinite(values), axis=1)][0])
            raise PreconditionError(f"系数在 t={bad:.12g} 处非有限")


@dataclass(frozen=True)
class SolvableTarget:
    """目标方程 dy'/dt = D(t)(c₀ + c₁y' + c₂y'²)"""

    c0: float
    c1: float
    c2: float
    D: TimeExpr

    def as_coeffs(self) -> Sl2Coeffs:
        d = as_expr(self.D)
        return Sl2Coeffs(d * self.c0, d * self.c1, d * self.c2)

    @property
    def discriminant(self) -> float:
        return self.c1 ** 2 - 4 * self.c0 * self.c2


@dataclass(frozen=True)
class IntegrabilityReport:
    """判据接受时的结果

    scaling 为 G(t)，y' = G(t)·y；对应的规范曲线为 diag(√G, 1/√G)。
    """

    K: float
    L: float
    target: SolvableTarget
    scaling: TimeExpr
    diagnostics: ConstancyReport
    grid: np.ndarray = field(default_factory=lambda: np.empty(0), compare=False)
    k_samples: np.ndarray = field(default_factory=lambda: np.empty(0), compare=False)

    def scaling_gauge(self) -> GaugeCurve:
        return GaugeCurve.diagonal(sqrt(self.scaling))

    def summary(self) -> str:
        t = self.target
        return (f"K={self.K:.12g} L={self.L:+g} c0={t.c0:+g} c1={t.c1:.12g} c2={t.c2:+g} "
                f"D={t.D} G={self.scaling} ({self.diagnostics})")
