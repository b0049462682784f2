"""SL(2,ℝ) 值曲线对系数三元组的仿射（规范）作用"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from core.errors import NotUnimodularError
from core.exprfn import TimeExpr, as_expr, const, differentiate
from core.sl2.coeffs import Coefficient, Sl2Coeffs, _coerce
from core.sl2.matrix import UNIMODULAR_TOL, Mat2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaugeCurve:
    """ḡ(t) = [[ᾱ, β̄], [γ̄, δ̄]]，作用于 x 为 x' = (ᾱx+β̄)/(γ̄x+δ̄)"""

    alpha: TimeExpr
    beta: TimeExpr
    gamma: TimeExpr
    delta: TimeExpr

    @classmethod
    def of(cls, alpha: Coefficient, beta: Coefficient, gamma: Coefficient, delta: Coefficient) -> 'GaugeCurve':
        return cls(_coerce(alpha), _coerce(beta), _coerce(gamma), _coerce(delta))

    @classmethod
    def identity(cls) -> 'GaugeCurve':
        return cls.constant(Mat2.identity())

    @classmethod
    def constant(cls, m: Mat2) -> 'GaugeCurve':
        return cls(const(m.a), const(m.b), const(m.c), const(m.d))

    @classmethod
    def diagonal(cls, a: Coefficient) -> 'GaugeCurve':
        """diag(a, 1/a)：x' = a²x"""
        e = _coerce(a)
        return cls(e, const(0.0), const(0.0), 1 / e)

    @classmethod
    def translation(cls, x1: Coefficient) -> 'GaugeCurve':
        """[[1, −x₁], [0, 1]]：x' = x − x₁"""
        return cls(const(1.0), -_coerce(x1), const(0.0), const(1.0))

    @cached_property
    def dots(self):
        return tuple(differentiate(e, 't') for e in (self.alpha, self.beta, self.gamma, self.delta))

    @property
    def det(self) -> TimeExpr:
        return self.alpha * self.delta - self.beta * self.gamma

    def at(self, t: float) -> Mat2:
        return Mat2(self.alpha.at(t), self.beta.at(t), self.gamma.at(t), self.delta.at(t))

    def check_unimodular(self, grid: Sequence[float], tol: float = UNIMODULAR_TOL) -> None:
        for t in grid:
            det = self.at(float(t)).det
            if abs(det - 1.0) > tol:
                raise NotUnimodularError(f"t={float(t):.6g} 处规范曲线行列式为 {det:.12g}")

    def compose(self, first: 'GaugeCurve') -> 'GaugeCurve':
        """逐点乘积 self·first（先作用 first 再作用 self）"""
        a2, b2, c2, d2 = self.alpha, self.beta, self.gamma, self.delta
        a1, b1, c1, d1 = first.alpha, first.beta, first.gamma, first.delta
        return GaugeCurve(
            a2 * a1 + b2 * c1, a2 * b1 + b2 * d1,
            c2 * a1 + d2 * c1, c2 * b1 + d2 * d1,
        )


def gauge_transform(c: Sl2Coeffs, g: GaugeCurve) -> Sl2Coeffs:
    """按仿射作用公式给出变换后的系数（符号组合，定义域错误推迟到求值时）

    b'₂ = δ²b₂ − δγb₁ + γ²b₀ + γδ̇ − δγ̇
    b'₁ = −2βδb₂ + (αδ+βγ)b₁ − 2αγb₀ + δα̇ − αδ̇ + βγ̇ − γβ̇
    b'₀ = β²b₂ − αβb₁ + α²b₀ + αβ̇ − βα̇
    """
    al, be, ga, de = g.alpha, g.beta, g.gamma, g.delta
    dal, dbe, dga, dde = g.dots
    b0, b1, b2 = c.b0, c.b1, c.b2

    new_b2 = de * de * b2 - de * ga * b1 + ga * ga * b0 + (ga * dde - de * dga)
    new_b1 = (-2.0 * be * de * b2 + (al * de + be * ga) * b1 - 2.0 * al * ga * b0
              + (de * dal - al * dde) + (be * dga - ga * dbe))
    new_b0 = be * be * b2 - al * be * b1 + al * al * b0 + (al * dbe - be * dal)
    return Sl2Coeffs(as_expr(new_b0), as_expr(new_b1), as_expr(new_b2))
