"""已知特解时的约化与求积公式

已知一个特解 x₁ 时，z = x − x₁ 满足 Bernoulli 方程 ż = (b₁+2b₂x₁)z + b₂z²，
通解由两次求积给出；b₂ ≡ 0 时方程本身是线性非齐次的，同样由两次求积给出。
"""

import logging
import math
from typing import Callable, List, Sequence, Tuple

import numpy as np

from core.errors import BlowUpError, ExprError, ParticularSolutionError, PreconditionError
from core.exprfn import TimeExpr, as_expr, const, differentiate, is_zero
from core.numerics import quad
from core.sl2 import GaugeCurve, Sl2Coeffs, gauge_transform

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-6
RESIDUAL_POINTS = 200
QUAD_PIECES = 64
QUAD_TOL = 1e-12


def particular_residual(c: Sl2Coeffs, x1: TimeExpr, grid: Sequence[float]) -> float:
    """sup |ẋ₁ − (b₀ + b₁x₁ + b₂x₁²)| 于网格"""
    x1 = as_expr(x1)
    dx1 = differentiate(x1, 't')
    worst = 0.0
    for t in grid:
        t = float(t)
        try:
            b0, b1, b2 = c.evaluate(t)
            x, dx = x1.at(t), dx1.at(t)
        except ExprError as e:
            raise ParticularSolutionError(math.inf, RESIDUAL_TOL) from e
        r = abs(dx - (b0 + b1 * x + b2 * x * x))
        if not math.isfinite(r):
            return math.inf
        worst = max(worst, r)
    return worst


def reduce_with_particular(c: Sl2Coeffs, x1: TimeExpr, interval: Tuple[float, float] = (0.0, 1.0),
                           tol: float = RESIDUAL_TOL, grid_points: int = RESIDUAL_POINTS) -> Sl2Coeffs:
    """以 ḡ = [[1, −x₁], [0, 1]] 作规范变换，返回 (0, b₁+2b₂x₁, b₂)

    Raises:
        ParticularSolutionError: x₁ 在网格上的残差超过 tol
    """
    x1 = as_expr(x1)
    grid = np.linspace(interval[0], interval[1], grid_points)
    residual = particular_residual(c, x1, grid)
    if not residual <= tol:
        raise ParticularSolutionError(residual, tol)
    logger.debug(f"特解残差 {residual:.3e}，执行平移约化")
    reduced = gauge_transform(c, GaugeCurve.translation(x1))
    # 残差检查已保证 b₀' 数值上为零，这里精确置零
    return Sl2Coeffs(const(0.0), reduced.b1, reduced.b2)


def _compiled(e) -> Callable[[float], float]:
    f = as_expr(e).compile()
    return lambda s: f({'t': s})


class _ExpIntegral:
    """B(s) = ∫_{t0}^{s} b₁，按分段网格缓存节点值"""

    def __init__(self, b1: Callable[[float], float], grid: np.ndarray, tol: float):
        self.b1 = b1
        self.grid = grid
        self.nodes: List[float] = [0.0]
        for lo, hi in zip(grid[:-1], grid[1:]):
            self.nodes.append(self.nodes[-1] + quad(b1, float(lo), float(hi), tol))
        self.tol = tol

    def on_piece(self, i: int) -> Callable[[float], float]:
        base, start = self.nodes[i], float(self.grid[i])
        return lambda s: base + quad(self.b1, start, s, self.tol)


def _pieces(t0: float, t: float) -> np.ndarray:
    return np.linspace(t0, t, QUAD_PIECES + 1)


def solve_bernoulli_reduced(c_reduced: Sl2Coeffs, z0: float, t: float, t0: float = 0.0,
                            tol: float = QUAD_TOL) -> float:
    """ż = b₁z + b₂z² 的解 z(t) = e^{B(t)} / (1/z₀ − ∫ b₂e^{B})

    Raises:
        PreconditionError: b₀ 不恒为零
        BlowUpError: 分母在 [t0, t] 内过零，携带括住零点的区间
    """
    if not is_zero(c_reduced.b0):
        raise PreconditionError(f"b0 不恒为零: {c_reduced.b0}")
    if z0 == 0.0:
        return 0.0
    if t == t0:
        return float(z0)

    grid = _pieces(t0, t)
    b1, b2 = _compiled(c_reduced.b1), _compiled(c_reduced.b2)
    big_b = _ExpIntegral(b1, grid, tol)

    den = [1.0 / z0]
    for i, (lo, hi) in enumerate(zip(grid[:-1], grid[1:])):
        inner = big_b.on_piece(i)
        den.append(den[-1] - quad(lambda s: b2(s) * math.exp(inner(s)), float(lo), float(hi), tol))
        if den[-1] == 0.0 or den[-1] * den[-2] < 0.0:
            raise BlowUpError((float(lo), float(hi)))
    return math.exp(big_b.nodes[-1]) / den[-1]


def linear_inhomogeneous_solve(b0, b1, x0: float, t: float, t0: float = 0.0,
                               tol: float = QUAD_TOL) -> float:
    """ẋ = b₀ + b₁x 的解 x(t) = e^{B(t)}(x₀ + ∫ b₀e^{−B})"""
    if t == t0:
        return float(x0)
    grid = _pieces(t0, t)
    f0, f1 = _compiled(b0), _compiled(b1)
    big_b = _ExpIntegral(f1, grid, tol)

    total = float(x0)
    for i, (lo, hi) in enumerate(zip(grid[:-1], grid[1:])):
        inner = big_b.on_piece(i)
        total += quad(lambda s: f0(s) * math.exp(-inner(s)), float(lo), float(hi), tol)
    return math.exp(big_b.nodes[-1]) * total
