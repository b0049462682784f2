"""Ermakov 系统、广义 Ermakov 系统与 Pinney 三元组的不变量及右端函数

约定 ξ = x·vy − y·vx；(yvx − xvy)² 与 ξ² 相同，故全篇只用这一个符号。
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Tuple

import numpy as np

from core.errors import (
    ExprError, NonFiniteSampleError, PinneyDomainError, QuadratureError, SingularIntegrandError,
)
from core.ermakov.pinney import ErmakovState, _pinney_accel
from core.exprfn import TimeExpr, const, substitute, var
from core.numerics import quad
from core.numerics.quadrature import as_callable
from core.sl2.coeffs import Coefficient, _coerce

logger = logging.getLogger(__name__)

U = var('u')
DEFAULT_BASE_POINT = 1.0


@dataclass(frozen=True)
class GeneralizedErmakovSpec:
    """ẍ = f(y/x)/x³ − ω²x，ÿ = g(y/x)/y³ − ω²y；f, g 是变量 u 的表达式"""

    f: TimeExpr
    g: TimeExpr
    omega2: TimeExpr = field(default_factory=lambda: const(1.0))
    base_point: float = DEFAULT_BASE_POINT

    @classmethod
    def of(cls, f: Coefficient, g: Coefficient, omega2: Coefficient = 1.0,
           base_point: float = DEFAULT_BASE_POINT) -> 'GeneralizedErmakovSpec':
        return cls(_coerce(f), _coerce(g), _coerce(omega2), float(base_point))

    def integrand(self) -> TimeExpr:
        """u·g(1/u) − f(1/u)/u³"""
        inv = 1 / U
        return U * substitute(self.g, {'u': inv}) - substitute(self.f, {'u': inv}) / U ** 3


def ermakov_invariant(st: ErmakovState, k: float = 1.0) -> float:
    """ψ = k(x/y)² + ξ²，x 为谐振子、y 为 Pinney 变量"""
    if st.y == 0.0:
        raise PinneyDomainError("y = 0，Ermakov 不变量无定义")
    return k * (st.x / st.y) ** 2 + st.xi ** 2


def generalized_invariant(spec: GeneralizedErmakovSpec, st: ErmakovState, tol: float = 1e-12) -> float:
    """½ξ² + ∫_{u*}^{x/y} [u·g(1/u) − u⁻³f(1/u)] du

    Raises:
        PinneyDomainError: y = 0
        SingularIntegrandError: 被积函数在积分路径上奇异
    """
    if st.y == 0.0:
        raise PinneyDomainError("y = 0，广义不变量无定义")
    h = as_callable(spec.integrand(), 'u')
    lo, hi = spec.base_point, st.x / st.y

    if min(lo, hi) <= 0.0 <= max(lo, hi):
        try:
            at_zero = float(h(0.0))
        except (ExprError, ArithmeticError) as e:
            raise SingularIntegrandError(f"积分路径 [{lo:.6g}, {hi:.6g}] 经过 u=0: {e}") from e
        if not math.isfinite(at_zero):
            raise SingularIntegrandError(f"积分路径 [{lo:.6g}, {hi:.6g}] 经过 u=0")
    try:
        integral = quad(h, lo, hi, tol)
    except (NonFiniteSampleError, QuadratureError) as e:
        raise SingularIntegrandError(f"被积函数在 [{lo:.6g}, {hi:.6g}] 上奇异: {e}") from e
    return 0.5 * st.xi ** 2 + integral


def triple_invariants(st: ErmakovState, k: float = 1.0) -> Tuple[float, float, float]:
    """(I₁, I₂, W)，x 为 Pinney 变量，y, z 为谐振子

    I₁ = ½((y·vx − x·vy)² + k(y/x)²)，I₂ = ½((x·vz − z·vx)² + k(z/x)²)，W = y·vz − z·vy
    """
    if not st.is_triple:
        raise PinneyDomainError("需要六维 (x, vx, y, vy, z, vz) 状态")
    if st.x == 0.0:
        raise PinneyDomainError("x = 0，三元组不变量无定义")
    x, vx, y, vy, z, vz = st.x, st.vx, st.y, st.vy, st.z, st.vz
    I1 = 0.5 * ((y * vx - x * vy) ** 2 + k * (y / x) ** 2)
    I2 = 0.5 * ((x * vz - z * vx) ** 2 + k * (z / x) ** 2)
    W = y * vz - z * vy
    return I1, I2, W


# ---------------------------------------------------------------- 右端函数

def ermakov_rhs(omega2: Coefficient, k: float = 1.0) -> Callable:
    """(x, vx, y, vy)：x 为谐振子，y 为 Pinney 变量"""
    w2 = as_callable(_coerce(omega2), 't')

    def rhs(t: float, s: np.ndarray) -> np.ndarray:
        w = w2(t)
        return np.array([s[1], -w * s[0], s[3], _pinney_accel(k, w, s[2])])
    return rhs


def generalized_rhs(spec: GeneralizedErmakovSpec) -> Callable:
    """(x, vx, y, vy)，f 与 g 在 u = y/x 处求值"""
    w2 = as_callable(spec.omega2, 't')
    f, g = spec.f.compile(), spec.g.compile()

    def rhs(t: float, s: np.ndarray) -> np.ndarray:
        x, vx, y, vy = s
        if x == 0.0 or y == 0.0:
            raise PinneyDomainError("广义 Ermakov 系统中 x 或 y 为零")
        w = w2(t)
        b = {'u': y / x, 't': t}
        return np.array([vx, f(b) / x ** 3 - w * x, vy, g(b) / y ** 3 - w * y])
    return rhs


def triple_rhs(omega2: Coefficient, k: float = 1.0) -> Callable:
    """(x, vx, y, vy, z, vz)：x 为 Pinney 变量，y 与 z 为谐振子"""
    w2 = as_callable(_coerce(omega2), 't')

    def rhs(t: float, s: np.ndarray) -> np.ndarray:
        w = w2(t)
        return np.array([s[1], _pinney_accel(k, w, s[0]), s[3], -w * s[2], s[5], -w * s[4]])
    return rhs
