"""Milne–Pinney 方程 ẍ = −ω²(t)x + k/x³"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import ErmakovError, PinneyDomainError
from core.exprfn import TimeExpr, const
from core.numerics import DEFAULT_CONFIG, EventKind, IntegratorConfig, Trajectory, integrate_ode
from core.numerics.quadrature import as_callable
from core.sl2.coeffs import Coefficient, _coerce

logger = logging.getLogger(__name__)

ZERO_GUARD = 1e-8


@dataclass(frozen=True)
class PinneySpec:
    k: float = 1.0
    omega2: TimeExpr = field(default_factory=lambda: const(1.0))

    @classmethod
    def of(cls, k: float, omega2: Coefficient) -> 'PinneySpec':
        return cls(float(k), _coerce(omega2))


@dataclass(frozen=True)
class ErmakovState:
    """Ermakov 系统的状态；三元组情形带 z, vz"""

    x: float
    vx: float
    y: float
    vy: float
    z: Optional[float] = None
    vz: Optional[float] = None

    @property
    def is_triple(self) -> bool:
        return self.z is not None

    @property
    def xi(self) -> float:
        """ξ = x·vy − y·vx"""
        return self.x * self.vy - self.y * self.vx

    def as_array(self) -> np.ndarray:
        values = [self.x, self.vx, self.y, self.vy]
        if self.is_triple:
            values += [self.z, self.vz]
        return np.array(values, dtype=float)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> 'ErmakovState':
        v = [float(a) for a in values]
        if len(v) not in (4, 6):
            raise ErmakovError(f"Ermakov 状态应为 4 或 6 维，实际 {len(v)} 维")
        return cls(*v)


def _pinney_accel(k: float, w2: float, x: float) -> float:
    if x == 0.0:
        raise PinneyDomainError("Pinney 变量为零")
    return -w2 * x + k / x ** 3


def pinney_rhs(s: PinneySpec):
    """状态 (x, v) 上的 v∂x + (−ω²x + k/x³)∂v"""
    w2 = as_callable(s.omega2, 't')
    k = s.k

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], _pinney_accel(k, w2(t), y[0])])
    return rhs


def zero_guard(index: int = 0, threshold: float = ZERO_GUARD):
    """|y[index]| 低于阈值时以 domain 事件停止积分"""
    def guard(t: float, y: np.ndarray) -> Optional[EventKind]:
        if abs(y[index]) < threshold:
            logger.warning(f"t={t:.12g} 处 Pinney 变量接近零，停止积分")
            return EventKind.DOMAIN
        return None
    return guard


def integrate_pinney(s: PinneySpec, x0: float, v0: float, t_span: Tuple[float, float],
                     sample_times: Optional[Sequence[float]] = None,
                     config: IntegratorConfig = DEFAULT_CONFIG) -> Trajectory:
    """积分 Pinney 方程，|x| < 1e-8 时以 domain 事件停止

    Raises:
        PinneyDomainError: 初值 x0 为零
    """
    if abs(x0) < ZERO_GUARD:
        raise PinneyDomainError(f"初值过于接近零: x0={x0}")
    return integrate_ode(pinney_rhs(s), [x0, v0], t_span, sample_times, config, zero_guard(0))
