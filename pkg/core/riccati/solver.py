"""Riccati 方程的数值解，允许穿过极点（投影直线上的 ∞）

两种等价方式：
  charts  在 x 与 w = 1/x 两个坐标卡之间切换积分；
  mobius  先积分群上的基本解，再对初值做 Möbius 作用。
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError
from core.numerics import DEFAULT_CONFIG, Event, EventKind, IntegratorConfig, Trajectory, integrate_ode
from core.riccati.problem import RiccatiProblem
from core.sl2 import INF, fundamental_solution, is_infinite
from core.utils.logger import log_operation

logger = logging.getLogger(__name__)

CHART_THRESHOLD = 1e6
DEFAULT_SAMPLES = 101
METHODS = ('charts', 'mobius')

_ROOT_ITERATIONS = 60


def projective_distance(x: float, y: float) -> float:
    """ℝ∪{∞} 上的弦距离 |x−y| / (√(1+x²)·√(1+y²))，取值在 [0, 1]"""
    if is_infinite(x) and is_infinite(y):
        return 0.0
    if is_infinite(x):
        return 1.0 / math.hypot(1.0, y)
    if is_infinite(y):
        return 1.0 / math.hypot(1.0, x)
    return abs(x - y) / (math.hypot(1.0, x) * math.hypot(1.0, y))


def _default_samples(p: RiccatiProblem, sample_times: Optional[Sequence[float]]) -> np.ndarray:
    if sample_times is None:
        return p.grid(DEFAULT_SAMPLES)
    return np.asarray(sample_times, dtype=float).reshape(-1)


@log_operation("Riccati 数值求解")
def solve_numeric(p: RiccatiProblem, sample_times: Optional[Sequence[float]] = None,
                  config: IntegratorConfig = DEFAULT_CONFIG, method: str = 'charts') -> Trajectory:
    """在 sample_times 上求解 p，单分量轨迹，∞ 样本记为 inf 并带 blow_up 事件

    Raises:
        ConfigError: 未知方法或网格无效
        NumericsError: 两个坐标卡中的积分均失败
    """
    samples = _default_samples(p, sample_times)
    if method == 'charts':
        return _solve_charts(p, samples, config)
    if method == 'mobius':
        return _solve_mobius(p, samples, config)
    raise ConfigError(f"未知求解方法: {method}（可选: {', '.join(METHODS)}）")


# ---------------------------------------------------------------- 坐标卡

def _to_x(chart: str, value: float) -> float:
    if chart == 'x':
        return value
    return INF if value == 0.0 else 1.0 / value


def _switch_guard(t: float, y: np.ndarray) -> Optional[EventKind]:
    if abs(y[0]) > CHART_THRESHOLD:
        return EventKind.CHART_SWITCH
    return None


def _locate_zero(rhs, ta: float, wa: float, tb: float, wb: float, config: IntegratorConfig) -> float:
    """w 在 (ta, tb) 内变号，用 Illinois 割线法定位零点；每次从 ta 重新积分"""
    def w_at(s: float) -> float:
        return float(integrate_ode(rhs, [wa], (ta, s), [s], config).final[0])

    lo, flo, hi, fhi = ta, wa, tb, wb
    s = hi
    tol = 1e-14 * max(1.0, abs(ta), abs(tb))
    for _ in range(_ROOT_ITERATIONS):
        s = (lo * fhi - hi * flo) / (fhi - flo)
        if not (min(lo, hi) < s < max(lo, hi)):
            s = 0.5 * (lo + hi)
        fs = w_at(s)
        if fs == 0.0:
            return s
        if fs * fhi < 0.0:
            lo, flo = hi, fhi
        else:
            flo *= 0.5
        hi, fhi = s, fs
        if abs(hi - lo) <= tol or abs(fs) <= 1e-15:
            break
    return s


def _poles_in_segment(rhs, points: List[Tuple[float, float]], config: IntegratorConfig) -> List[float]:
    """w 坐标卡中的零点即 x 的极点"""
    poles = []
    for i, (t, w) in enumerate(points):
        if w == 0.0:
            poles.append(t)
            continue
        if i == 0:
            continue
        ta, wa = points[i - 1]
        if wa != 0.0 and wa * w < 0.0 and t > ta:
            poles.append(_locate_zero(rhs, ta, wa, t, w, config))
    # 相邻点重复时可能重复记录
    unique = []
    for pole in poles:
        if not unique or abs(pole - unique[-1]) > 1e-12 * max(1.0, abs(pole)):
            unique.append(pole)
    return unique


def _solve_charts(p: RiccatiProblem, samples: np.ndarray, config: IntegratorConfig) -> Trajectory:
    rhs = {'x': p.coeffs.riccati_rhs(), 'w': p.coeffs.inverse_chart_rhs()}
    if is_infinite(p.x0):
        chart, value = 'w', 0.0
    elif abs(p.x0) > CHART_THRESHOLD:
        chart, value = 'w', 1.0 / p.x0
    else:
        chart, value = 'x', p.x0

    t = p.t0
    out_t: List[float] = []
    out_x: List[float] = []
    events: List[Event] = []
    k = 0
    switches = 0

    while k < samples.size:
        traj = integrate_ode(rhs[chart], [value], (t, p.t1), samples[k:], config, _switch_guard)
        halt = next((e for e in traj.events
                     if e.kind in (EventKind.CHART_SWITCH, EventKind.BLOW_UP)), None)

        if chart == 'w':
            points = [(t, value)] + [(float(s), float(w)) for s, w in zip(traj.times, traj.component(0))]
            if halt is not None:
                points.append((halt.time, halt.state[0]))
            for pole in _poles_in_segment(rhs['w'], points, config):
                logger.debug(f"检测到极点 t={pole:.12g}")
                events.append(Event(pole, EventKind.BLOW_UP))

        out_t.extend(float(s) for s in traj.times)
        out_x.extend(_to_x(chart, float(v)) for v in traj.component(0))
        k += len(traj)

        if halt is None:
            break
        t = halt.time
        current = halt.state[0]
        chart = 'w' if chart == 'x' else 'x'
        value = INF if current == 0.0 else 1.0 / current
        events.append(Event(t, EventKind.CHART_SWITCH))
        switches += 1

    logger.debug(f"坐标卡求解完成: {switches} 次切换，{len(out_t)} 个样本")
    events.sort(key=lambda e: e.time)
    return Trajectory(np.array(out_t), np.array(out_x).reshape(-1, 1), tuple(events))


# ---------------------------------------------------------------- Möbius

def _solve_mobius(p: RiccatiProblem, samples: np.ndarray, config: IntegratorConfig) -> Trajectory:
    t_span = (p.t0, p.t1)
    grid = samples if samples[0] <= p.t0 else np.concatenate([[p.t0], samples])
    curve = fundamental_solution(p.coeffs, t_span, grid, config)

    m = curve.matrices
    if is_infinite(p.x0):
        den = m[:, 1, 0]
    else:
        den = m[:, 1, 0] * p.x0 + m[:, 1, 1]
    values = curve.act(p.x0)

    events = []
    times = curve.times
    for i, d in enumerate(den):
        if d == 0.0:
            events.append(Event(float(times[i]), EventKind.BLOW_UP))
        elif i > 0 and den[i - 1] != 0.0 and den[i - 1] * d < 0.0:
            # 分母在两样本间变号
            t_cross = times[i - 1] + (times[i] - times[i - 1]) * den[i - 1] / (den[i - 1] - d)
            events.append(Event(float(t_cross), EventKind.BLOW_UP))

    keep = slice(len(grid) - len(samples), None)
    return Trajectory(times[keep], values[keep].reshape(-1, 1), tuple(events))
