"""自适应 Simpson 数值积分"""

import logging
import math
from typing import Callable, Optional, Tuple, Union

from core.errors import ExprError, NonFiniteSampleError, QuadratureError
from core.exprfn import TimeExpr

logger = logging.getLogger(__name__)

Integrand = Union[TimeExpr, Callable[[float], float]]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 50
EPS = 2.220446049250313e-16


def as_callable(f: Integrand, variable: Optional[str] = None) -> Callable[[float], float]:
    """把单变量表达式或可调用对象统一为 float -> float"""
    if isinstance(f, TimeExpr):
        names = f.free_variables()
        if variable is None:
            if len(names) > 1:
                raise QuadratureError(f"被积表达式含多个变量: {sorted(names)}")
            variable = next(iter(names)) if names else 't'
        compiled = f.compile()
        name = variable
        return lambda s: compiled({name: s})
    return f


def quad_with_error(f: Integrand, a: float, b: float, tol: float = DEFAULT_TOL,
                    max_depth: int = DEFAULT_MAX_DEPTH,
                    variable: Optional[str] = None) -> Tuple[float, float]:
    """自适应 Simpson 积分，返回 (积分值, 绝对误差估计)

    每层细分容差减半，误差估计 (S₂−S)/15 并做 Richardson 修正；a > b 时返回带符号结果。

    Raises:
        NonFiniteSampleError: 被积函数采样非有限或求值失败
        QuadratureError: 达到细分层数上限仍未满足容差
    """
    if a == b:
        return 0.0, 0.0
    if a > b:
        value, error = quad_with_error(f, b, a, tol, max_depth, variable)
        return -value, error

    g = as_callable(f, variable)

    def sample(s: float) -> float:
        try:
            value = float(g(s))
        except (ExprError, ArithmeticError, ValueError) as e:
            raise NonFiniteSampleError(f"被积函数求值失败: {e}", s) from e
        if not math.isfinite(value):
            raise NonFiniteSampleError("被积函数采样非有限", s)
        return value

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def adaptive(lo, hi, flo, fmid, fhi, whole, depth, tol_here):
        mid = (lo + hi) / 2.0
        h = (hi - lo) / 2.0
        fl = sample((lo + mid) / 2.0)
        fr = sample((mid + hi) / 2.0)
        left = simpson(flo, fl, fmid, h / 2.0)
        right = simpson(fmid, fr, fhi, h / 2.0)
        error = (left + right - whole) / 15.0

        # 误差已低于舍入水平时同样接受
        if abs(error) <= tol_here or abs(error) <= 4 * EPS * abs(left + right):
            return left + right + error, abs(error)
        if depth >= max_depth:
            raise QuadratureError(
                f"自适应 Simpson 达到细分上限 {max_depth}，区间 [{lo:.12g}, {hi:.12g}] 误差估计 {abs(error):.3e}"
            )
        lv, le = adaptive(lo, mid, flo, fl, fmid, left, depth + 1, tol_here / 2.0)
        rv, re = adaptive(mid, hi, fmid, fr, fhi, right, depth + 1, tol_here / 2.0)
        return lv + rv, le + re

    fa, fb = sample(a), sample(b)
    m = (a + b) / 2.0
    fm = sample(m)
    whole = simpson(fa, fm, fb, (b - a) / 2.0)
    return adaptive(a, b, fa, fm, fb, whole, 0, tol)


def quad(f: Integrand, a: float, b: float, tol: float = DEFAULT_TOL,
         max_depth: int = DEFAULT_MAX_DEPTH, variable: Optional[str] = None) -> float:
    """∫ₐᵇ f，绝对误差估计不超过 tol"""
    value, _ = quad_with_error(f, a, b, tol, max_depth, variable)
    return value


def cumulative_quad(f: Integrand, grid, tol: float = DEFAULT_TOL,
                    variable: Optional[str] = None):
    """在递增网格上累积积分，返回与网格等长的列表，首项为 0

    每段单独满足 tol，总误差不超过 段数·tol。"""
    g = as_callable(f, variable)
    values = [0.0]
    total = 0.0
    for lo, hi in zip(grid[:-1], grid[1:]):
        total += quad(g, float(lo), float(hi), tol)
        values.append(total)
    return values
