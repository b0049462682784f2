"""三次 Hermite 插值，用于在数值轨迹上连续化被积函数"""

from typing import Callable, Union

import numpy as np

from core.errors import NumericsError
from core.numerics.trajectory import Trajectory


class HermiteInterpolant:
    """分段三次 Hermite 插值，节点处取给定的值与导数"""

    def __init__(self, times, values, derivatives):
        self.times = np.asarray(times, dtype=float)
        self.values = np.asarray(values, dtype=float)
        self.derivatives = np.asarray(derivatives, dtype=float)
        if not (self.times.shape == self.values.shape == self.derivatives.shape):
            raise NumericsError("插值节点、值、导数长度不一致")
        if self.times.size < 2 or not np.all(np.diff(self.times) > 0):
            raise NumericsError("插值节点至少两个且严格递增")

    @property
    def domain(self):
        return float(self.times[0]), float(self.times[-1])

    def __call__(self, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        scalar = np.ndim(t) == 0
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.domain
        span = hi - lo
        if np.any(tt < lo - 1e-12 * span) or np.any(tt > hi + 1e-12 * span):
            raise NumericsError(f"插值点超出定义域 [{lo:.12g}, {hi:.12g}]")

        i = np.clip(np.searchsorted(self.times, tt, side='right') - 1, 0, self.times.size - 2)
        t0, t1 = self.times[i], self.times[i + 1]
        h = t1 - t0
        s = (tt - t0) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s ** 2 * (3 - 2 * s)
        h11 = s ** 2 * (s - 1)
        out = (h00 * self.values[i] + h10 * h * self.derivatives[i]
               + h01 * self.values[i + 1] + h11 * h * self.derivatives[i + 1])
        return float(out[0]) if scalar else out

    @classmethod
    def from_trajectory(cls, traj: Trajectory, rhs: Callable, component: int = 0) -> 'HermiteInterpolant':
        """以轨迹第 component 个分量为值，导数取自右端函数"""
        derivs = np.array([np.asarray(rhs(t, y), dtype=float)[component]
                           for t, y in zip(traj.times, traj.states)])
        return cls(traj.times, traj.component(component), derivs)
