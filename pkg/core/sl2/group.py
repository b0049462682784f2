"""群上的方程：Φ̇ = A(t)Φ，Φ(t₀) = I"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from core.numerics import DEFAULT_CONFIG, IntegratorConfig, integrate_ode
from core.sl2.coeffs import Sl2Coeffs
from core.sl2.matrix import Mat2, Mat2Curve
from core.utils.logger import log_operation

logger = logging.getLogger(__name__)


def algebra_matrix(c: Sl2Coeffs, t: float) -> Mat2:
    """A(t) = b₀a₀ + b₁a₁ + b₂a₂ = [[b₁/2, b₀], [−b₂, −b₁/2]]"""
    b0, b1, b2 = c.evaluate(t)
    return Mat2(0.5 * b1, b0, -b2, -0.5 * b1)


def _group_rhs(c: Sl2Coeffs):
    b0f, b1f, b2f = (e.compile() for e in c.exprs)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        b = {'t': t}
        b0, half, b2 = b0f(b), 0.5 * b1f(b), b2f(b)
        a, bb, cc, d = y
        return np.array([
            half * a + b0 * cc, half * bb + b0 * d,
            -b2 * a - half * cc, -b2 * bb - half * d,
        ])
    return rhs


@log_operation("基本解积分")
def fundamental_solution(c: Sl2Coeffs, t_span: Tuple[float, float],
                         sample_times: Optional[Sequence[float]] = None,
                         config: IntegratorConfig = DEFAULT_CONFIG) -> Mat2Curve:
    """以四维 ODE 积分基本解，每个样本乘以 1/√det 归一化"""
    traj = integrate_ode(_group_rhs(c), [1.0, 0.0, 0.0, 1.0], t_span, sample_times, config)
    mats = traj.states.reshape(-1, 2, 2)
    raw_det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    normalized = mats / np.sqrt(raw_det)[:, None, None]
    logger.debug(f"基本解行列式最大漂移: {float(np.max(np.abs(raw_det - 1.0))):.3e}")
    return Mat2Curve(traj.times, normalized, raw_det)
