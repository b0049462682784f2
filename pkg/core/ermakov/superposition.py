"""Pinney 方程的叠加规则：由同一频率的两个谐振子解 y, z 重建 Pinney 解

x = (√2/W)·√(I₂y² + I₁z² ± √(4I₁I₂ − kW²)·yz)
"""

import logging
import math
from typing import Optional

import numpy as np

from core.errors import DegenerateInvariantsError, GridMismatchError, PinneyDomainError
from core.ermakov.invariants import triple_invariants
from core.ermakov.pinney import ErmakovState
from core.numerics import Trajectory

logger = logging.getLogger(__name__)

# 判别式/被开方数的舍入容差（相对）
ROUNDOFF = 1e-12
BRANCH_TOL = 1e-9


def _discriminant(I1: float, I2: float, W: float, k: float) -> float:
    disc = 4.0 * I1 * I2 - k * W * W
    if disc < 0.0:
        if disc >= -ROUNDOFF * max(1.0, 4.0 * abs(I1 * I2), abs(k) * W * W):
            return 0.0
        raise DegenerateInvariantsError(f"判别式 4I₁I₂ − kW² = {disc:.6e} 为负")
    return disc


def pinney_superposition(y: float, z: float, I1: float, I2: float, W: float, k: float = 1.0,
                         sign: int = 1) -> float:
    """按所选分支 sign ∈ {+1, −1} 计算 x

    Raises:
        DegenerateInvariantsError: W = 0 或判别式为负
        PinneyDomainError: 被开方数为负
    """
    if W == 0.0:
        raise DegenerateInvariantsError("W = 0，两个谐振子解线性相关")
    root = math.sqrt(_discriminant(I1, I2, W, k))
    radicand = I2 * y * y + I1 * z * z + (1 if sign >= 0 else -1) * root * y * z
    if radicand < 0.0:
        if radicand >= -ROUNDOFF * (abs(I2) * y * y + abs(I1) * z * z + root * abs(y * z) + 1e-300):
            radicand = 0.0
        else:
            raise PinneyDomainError(f"被开方数为负: {radicand:.6e}")
    return math.sqrt(2.0) / W * math.sqrt(radicand)


def _branch_half_rate(y, vy, z, vz, I1, I2, W, k, sign) -> float:
    """x·ẋ = ½ d(x²)/dt 在给定分支上的值"""
    root = math.sqrt(_discriminant(I1, I2, W, k))
    d_radicand = 2 * I2 * y * vy + 2 * I1 * z * vz + sign * root * (vy * z + y * vz)
    return d_radicand / (W * W)


def select_branch(y0: float, vy0: float, z0: float, vz0: float, I1: float, I2: float, W: float,
                  k: float, x0: float, v0: Optional[float] = None) -> int:
    """选取在 t0 处与 x(t0) 吻合的分支；两支都吻合时比较 x·ẋ，仍并列取 +"""
    values = {s: pinney_superposition(y0, z0, I1, I2, W, k, s) for s in (1, -1)}
    scale = max(1.0, abs(x0))
    # x → −x 仍是解，只比较模长
    errors = {s: abs(abs(v) - abs(x0)) for s, v in values.items()}
    if abs(errors[1] - errors[-1]) > BRANCH_TOL * scale:
        return 1 if errors[1] < errors[-1] else -1
    if v0 is None:
        return 1
    target = x0 * v0
    rates = {s: _branch_half_rate(y0, vy0, z0, vz0, I1, I2, W, k, s) for s in (1, -1)}
    rate_err = {s: abs(r - target) for s, r in rates.items()}
    if abs(rate_err[1] - rate_err[-1]) > BRANCH_TOL * max(1.0, abs(target)):
        return 1 if rate_err[1] < rate_err[-1] else -1
    return 1


def pinney_from_oscillators(ytraj: Trajectory, ztraj: Trajectory, x0: float, v0: float,
                            k: float = 1.0) -> Trajectory:
    """由两个谐振子轨迹 (y, vy)、(z, vz) 重建满足 x(t0)=x0, ẋ(t0)=v0 的 Pinney 解

    不变量取自 t0 处的共同状态；返回单分量轨迹 x(t)。
    """
    if not ytraj.same_grid(ztraj, 1e-12 * max(1.0, float(np.max(np.abs(ytraj.times))))):
        raise GridMismatchError("两个谐振子轨迹的采样网格不一致")
    y0, vy0 = ytraj.states[0]
    z0, vz0 = ztraj.states[0]
    I1, I2, W = triple_invariants(ErmakovState(x0, v0, y0, vy0, z0, vz0), k)
    sign = select_branch(y0, vy0, z0, vz0, I1, I2, W, k, x0, v0)
    logger.debug(f"Pinney 叠加: I1={I1:.12g} I2={I2:.12g} W={W:.12g} 分支 {sign:+d}")

    orientation = -1.0 if x0 * W < 0.0 else 1.0
    xs = [orientation * pinney_superposition(y, z, I1, I2, W, k, sign)
          for y, z in zip(ytraj.component(0), ztraj.component(0))]
    return Trajectory(ytraj.times, np.array(xs).reshape(-1, 1))
