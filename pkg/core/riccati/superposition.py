"""交比叠加规则

任意四个解的交比 (x−x₁)/(x−x₂) : (x₃−x₁)/(x₃−x₂) 与时间无关，
因此三个解加一个常数 k 即确定通解。
"""

from core.errors import DegenerateConfigurationError
from core.sl2.matrix import Mat2, is_infinite, mobius


def _same(a: float, b: float) -> bool:
    if is_infinite(a) or is_infinite(b):
        return is_infinite(a) and is_infinite(b)
    return a == b


def _normalizing_matrix(x1: float, x2: float, x3: float) -> Mat2:
    """把 x₁, x₂, x₃ 依次送到 0, ∞, 1 的 Möbius 变换"""
    if _same(x1, x2) or _same(x1, x3) or _same(x2, x3):
        raise DegenerateConfigurationError(f"交比配置退化: x1={x1}, x2={x2}, x3={x3}")
    if is_infinite(x1):
        return Mat2(0.0, x3 - x2, 1.0, -x2)
    if is_infinite(x2):
        return Mat2(1.0, -x1, 0.0, x3 - x1)
    if is_infinite(x3):
        return Mat2(1.0, -x1, 1.0, -x2)
    return Mat2(x3 - x2, -x1 * (x3 - x2), x3 - x1, -x2 * (x3 - x1))


def cross_ratio(x: float, x1: float, x2: float, x3: float) -> float:
    """交比 k；x = x₂ 时为 ∞"""
    return mobius(_normalizing_matrix(x1, x2, x3), x)


def superpose_cross_ratio(x1: float, x2: float, x3: float, k: float) -> float:
    """解出交比等于 k 的 x：k=0 → x₁，k=1 → x₃，k=∞ → x₂"""
    m = _normalizing_matrix(x1, x2, x3)
    # 伴随矩阵与逆矩阵只差一个标量，作用相同
    adjugate = Mat2(m.d, -m.b, -m.c, m.a)
    return mobius(adjugate, k)
