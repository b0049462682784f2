"""SL(2,ℝ) 李系统的系数曲线 (b₀(t), b₁(t), b₂(t))"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from core.exprfn import TimeExpr, as_expr, differentiate, parse

Coefficient = Union[TimeExpr, str, float, int]


def _coerce(value: Coefficient) -> TimeExpr:
    if isinstance(value, str):
        return parse(value)
    return as_expr(value)


@dataclass(frozen=True)
class Sl2Coeffs:
    """系数三元组，导数按需符号计算并缓存

    对应 Riccati 方程 ẋ = b₀ + b₁x + b₂x² 与线性系统 ẋ = b₁x/2 + b₀p, ṗ = −b₂x − b₁p/2。
    """

    b0: TimeExpr
    b1: TimeExpr
    b2: TimeExpr

    @classmethod
    def of(cls, b0: Coefficient, b1: Coefficient, b2: Coefficient) -> 'Sl2Coeffs':
        return cls(_coerce(b0), _coerce(b1), _coerce(b2))

    @cached_property
    def db0(self) -> TimeExpr:
        return differentiate(self.b0, 't')

    @cached_property
    def db1(self) -> TimeExpr:
        return differentiate(self.b1, 't')

    @cached_property
    def db2(self) -> TimeExpr:
        return differentiate(self.b2, 't')

    @property
    def exprs(self) -> Tuple[TimeExpr, TimeExpr, TimeExpr]:
        return self.b0, self.b1, self.b2

    def evaluate(self, t: float) -> Tuple[float, float, float]:
        return self.b0.at(t), self.b1.at(t), self.b2.at(t)

    def derivatives(self, t: float) -> Tuple[float, float, float]:
        return self.db0.at(t), self.db1.at(t), self.db2.at(t)

    def sample(self, grid: Sequence[float]) -> np.ndarray:
        """在网格上求值，形状 (样本数, 3)"""
        return np.array([self.evaluate(float(t)) for t in grid])

    def scaled(self, factor: Coefficient) -> 'Sl2Coeffs':
        """每个系数乘以同一个时间函数 D(t)"""
        d = _coerce(factor)
        return Sl2Coeffs(d * self.b0, d * self.b1, d * self.b2)

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.exprs)

    def riccati_rhs(self) -> Callable[[float, np.ndarray], np.ndarray]:
        b0, b1, b2 = (e.compile() for e in self.exprs)

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            b = {'t': t}
            x = y[0]
            return np.array([b0(b) + b1(b) * x + b2(b) * x * x])
        return rhs

    def inverse_chart_rhs(self) -> Callable[[float, np.ndarray], np.ndarray]:
        """w = 1/x 坐标下的方程 ẇ = −b₂ − b₁w − b₀w²"""
        b0, b1, b2 = (e.compile() for e in self.exprs)

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            b = {'t': t}
            w = y[0]
            return np.array([-b2(b) - b1(b) * w - b0(b) * w * w])
        return rhs

    def linear_rhs(self) -> Callable[[float, np.ndarray], np.ndarray]:
        """同一系数在相空间 (x, p) 上的线性作用"""
        b0, b1, b2 = (e.compile() for e in self.exprs)

        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            b = {'t': t}
            half = 0.5 * b1(b)
            x, p = y[0], y[1]
            return np.array([half * x + b0(b) * p, -b2(b) * x - half * p])
        return rhs

    def __str__(self) -> str:
        return f"(b0={self.b0}, b1={self.b1}, b2={self.b2})"
