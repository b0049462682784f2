"""谐振子的叠加规则

两个解的线性组合仍是解；Wronskian F = x₁v₂ − x₂v₁ 是沿共同演化的解的常数；
已知一个解 x₁ 时，第二个解由一次求积给出。
"""

import logging
import math
from typing import Callable, Union

import numpy as np

from core.errors import GridMismatchError, NonFiniteSampleError, OscillatorError, PoleInIntervalError
from core.exprfn import TimeExpr
from core.numerics import Trajectory, quad
from core.numerics.quadrature import as_callable

logger = logging.getLogger(__name__)

SolutionLike = Union[TimeExpr, Callable[[float], float]]

_SIGN_CHECK_POINTS = 65


def _require_same_grid(a: Trajectory, b: Trajectory) -> None:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(a.times))) if len(a) else 1.0)
    if not a.same_grid(b, tol):
        raise GridMismatchError(f"采样网格不一致: {len(a)} 与 {len(b)} 个样本")
    if a.dim != 2 or b.dim != 2:
        raise GridMismatchError(f"需要 (x, v) 二维轨迹，实际 {a.dim} 与 {b.dim} 维")


def linear_superposition(x1traj: Trajectory, x2traj: Trajectory, k1: float, k2: float) -> Trajectory:
    """x = k₁x₁ + k₂x₂, v = k₁v₁ + k₂v₂"""
    _require_same_grid(x1traj, x2traj)
    return Trajectory(x1traj.times, k1 * x1traj.states + k2 * x2traj.states)


def wronskian_invariants(x1traj: Trajectory, x2traj: Trajectory) -> np.ndarray:
    """逐样本 F = x₁v₂ − x₂v₁"""
    _require_same_grid(x1traj, x2traj)
    x1, v1 = x1traj.component(0), x1traj.component(1)
    x2, v2 = x2traj.component(0), x2traj.component(1)
    return x1 * v2 - x2 * v1


def invariant_superposition(x1traj: Trajectory, x2traj: Trajectory, F1: float, F2: float) -> Trajectory:
    """由 F₁ = xv₁ − x₁v 与 F₂ = xv₂ − x₂v 解出 (x, v)

    Raises:
        OscillatorError: 两个解线性相关（Wronskian 为零）
    """
    _require_same_grid(x1traj, x2traj)
    x1, v1 = x1traj.component(0), x1traj.component(1)
    x2, v2 = x2traj.component(0), x2traj.component(1)
    W = x1 * v2 - x2 * v1
    if np.any(W == 0.0):
        raise OscillatorError("两个解线性相关，Wronskian 为零")
    x = (x1 * F2 - x2 * F1) / W
    v = (v1 * F2 - v2 * F1) / W
    return Trajectory(x1traj.times, np.column_stack([x, v]))


def partial_superposition(x1: SolutionLike, k: float, kprime: float, t: float,
                          base: float = 0.0, tol: float = 1e-11) -> float:
    """x₂(t) = k'x₁(t) + k·x₁(t)∫_base^t dζ/x₁²(ζ)

    x1 可以是表达式或可调用对象（例如数值轨迹的 HermiteInterpolant）。

    Raises:
        PoleInIntervalError: x₁ 在积分区间内为零
    """
    f = as_callable(x1, 't') if isinstance(x1, TimeExpr) else x1
    x1_t = float(f(t))
    if k == 0.0:
        return kprime * x1_t

    probe = np.linspace(base, t, _SIGN_CHECK_POINTS)
    values = np.array([float(f(s)) for s in probe])
    crossing = np.flatnonzero((values[:-1] * values[1:] <= 0.0))
    if values[0] == 0.0 or crossing.size:
        at = float(probe[crossing[0]]) if crossing.size else float(base)
        raise PoleInIntervalError(at, (float(base), float(t)))

    try:
        integral = quad(lambda s: 1.0 / float(f(s)) ** 2, base, t, tol)
    except NonFiniteSampleError as e:
        raise PoleInIntervalError(e.at if e.at is not None else math.nan, (float(base), float(t))) from e
    return kprime * x1_t + k * x1_t * integral


def oscillator_pair_rhs(omega2: TimeExpr):
    """两个同频率谐振子 (x, vx, y, vy)，即各向同性二维振子"""
    w2 = as_callable(omega2, 't')

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        w = w2(t)
        return np.array([y[1], -w * y[0], y[3], -w * y[2]])
    return rhs
