"""自适应 Runge–Kutta 积分器

Dormand–Prince 5(4) 嵌入对，带步长拒绝与 FSAL；在采样点上使用四阶连续
扩展给出稠密输出。另提供定步长 RK4 作交叉检验。
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from core.errors import (
    ConfigError, ErmakovError, ExprError, RhsEvaluationError, StepBudgetExceeded, StepSizeUnderflow,
)
from core.numerics.config import DEFAULT_CONFIG, IntegratorConfig
from core.numerics.trajectory import Event, EventKind, Trajectory

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]
Guard = Callable[[float, np.ndarray], Optional[EventKind]]

# Butcher 表
C = np.array([0.0, 1/5, 3/10, 4/5, 8/9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1/5]),
    np.array([3/40, 9/40]),
    np.array([44/45, -56/15, 32/9]),
    np.array([19372/6561, -25360/2187, 64448/6561, -212/729]),
    np.array([9017/3168, -355/33, 46732/5247, 49/176, -5103/18656]),
    np.array([35/384, 0.0, 500/1113, 125/192, -2187/6784, 11/84]),
]
B = A[6]
# 五阶解与嵌入四阶解之差
E = np.array([-71/57600, 0.0, 71/16695, -71/1920, 17253/339200, -22/525, 1/40])
# 连续扩展系数：y(t+θh) = y + h·(Kᵀ P)·[θ, θ², θ³, θ⁴]
P = np.array([
    [1, -8048581381/2820520608, 8663915743/2820520608, -12715105075/11282082432],
    [0, 0, 0, 0],
    [0, 131558114200/32700410799, -68118460800/10900136933, 87487479700/32700410799],
    [0, -1754552775/470086768, 14199869525/1410260304, -10690763975/1880347072],
    [0, 127303824393/49829197408, -318862633887/49829197408, 701980252875/199316789632],
    [0, -282668133/205662961, 2019193451/616988883, -1453857185/822651844],
    [0, 40617522/29380423, -110615467/29380423, 69997945/29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
ERROR_EXPONENT = -1 / 5

_STAGE_ERRORS = (ExprError, ErmakovError, ArithmeticError, ValueError)


def _check_grid(t_span: Tuple[float, float], sample_times) -> np.ndarray:
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
        raise ConfigError(f"积分区间无效（仅支持正向积分）: [{t0}, {t1}]")
    samples = np.array([t0, t1] if sample_times is None else sample_times, dtype=float).reshape(-1)
    if samples.size == 0:
        raise ConfigError("采样网格为空")
    if samples.size > 1 and not np.all(np.diff(samples) > 0):
        raise ConfigError("采样时间必须严格递增")
    span = max(1.0, abs(t0), abs(t1))
    if samples[0] < t0 - 1e-12 * span or samples[-1] > t1 + 1e-12 * span:
        raise ConfigError(f"采样时间超出积分区间 [{t0}, {t1}]")
    return samples


def _evaluate(rhs: Rhs, t: float, y: np.ndarray) -> np.ndarray:
    try:
        value = np.asarray(rhs(t, y), dtype=float)
    except _STAGE_ERRORS as e:
        raise RhsEvaluationError(t, e) from e
    if value.shape != y.shape:
        raise RhsEvaluationError(t, ValueError(f"右端维数 {value.shape} 与状态 {y.shape} 不符"))
    return value


def integrate_ode(rhs: Rhs, y0: Sequence[float], t_span: Tuple[float, float],
                  sample_times: Optional[Sequence[float]] = None,
                  config: IntegratorConfig = DEFAULT_CONFIG,
                  guard: Optional[Guard] = None) -> Trajectory:
    """积分 ẏ = rhs(t, y)

    Args:
        rhs: 右端函数
        y0: t_span[0] 处的初值
        t_span: 积分区间 (t0, t1)，t1 ≥ t0
        sample_times: 严格递增的采样网格，默认为两端点
        config: 积分器参数
        guard: 每个接受步之后调用；返回事件类型时记录事件并停止

    Returns:
        Trajectory：到达的采样点及事件。爆破或 guard 停止时轨迹在停止步之前截断。

    Raises:
        StepBudgetExceeded, StepSizeUnderflow, RhsEvaluationError
    """
    samples = _check_grid(t_span, sample_times)
    t0, t1 = float(t_span[0]), float(t_span[1])
    y = np.array(y0, dtype=float).reshape(-1)
    n = y.size

    out_t, out_y, events = [], [], []
    k = 0
    while k < samples.size and samples[k] <= t0:
        out_t.append(samples[k])
        out_y.append(y.copy())
        k += 1

    K = np.empty((7, n))
    K[0] = _evaluate(rhs, t0, y)
    if not np.all(np.isfinite(K[0])):
        raise RhsEvaluationError(t0, ValueError("初值处右端非有限"))

    t = t0
    h = min(config.h_init, config.h_max, max(t1 - t0, 0.0)) if t1 > t0 else 0.0
    steps = 0
    accepted = 0

    while t < t1 and k < samples.size:
        if steps >= config.max_steps:
            raise StepBudgetExceeded(config.max_steps, t)
        steps += 1

        h = min(h, config.h_max)
        last = t + h >= t1
        if last:
            h = t1 - t
        t_new = t1 if last else t + h

        ok = True
        try:
            with np.errstate(all='ignore'):
                for s in range(1, 7):
                    ys = y + h * (A[s] @ K[:s])
                    K[s] = np.asarray(rhs(t + C[s] * h, ys), dtype=float)
                y_new = y + h * (B @ K[:6])
                # FSAL：第七级即下一步的第一级
                K[6] = np.asarray(rhs(t_new, y_new), dtype=float)
                err_vec = h * (E @ K)
                scale = config.atol + config.rtol * np.maximum(np.abs(y), np.abs(y_new))
                err = float(np.max(np.abs(err_vec) / scale))
            ok = math.isfinite(err) and bool(np.all(np.isfinite(y_new)))
            stage_error = None
        except _STAGE_ERRORS as e:
            logger.debug(f"t={t:.6g} h={h:.3e} 中间级求值失败，缩小步长: {e}")
            ok = False
            err = math.inf
            stage_error = e

        if ok and err <= 1.0:
            Q = K.T @ P
            while k < samples.size and samples[k] <= t_new:
                ts = samples[k]
                if ts == t_new:
                    ys = y_new.copy()
                else:
                    theta = (ts - t) / h
                    ys = y + h * (Q @ np.array([theta, theta**2, theta**3, theta**4]))
                out_t.append(ts)
                out_y.append(ys)
                k += 1

            t, y = t_new, y_new
            K[0] = K[6]
            accepted += 1

            if np.any(np.abs(y) > config.blow_up):
                logger.debug(f"t={t:.12g} 处分量超过阈值 {config.blow_up:.1e}，标记爆破")
                events.append(Event(t, EventKind.BLOW_UP, tuple(y)))
                break
            if guard is not None:
                kind = guard(t, y)
                if kind is not None:
                    logger.debug(f"t={t:.12g} 处守卫触发: {kind.value}")
                    events.append(Event(t, EventKind(kind), tuple(y)))
                    break

            factor = MAX_FACTOR if err == 0.0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** ERROR_EXPONENT))
            h *= factor
        else:
            if ok:
                h *= max(MIN_FACTOR, SAFETY * err ** ERROR_EXPONENT)
            else:
                h *= MIN_FACTOR
            if h < 16 * np.finfo(float).eps * max(1.0, abs(t)):
                if stage_error is not None:
                    raise RhsEvaluationError(t, stage_error) from stage_error
                raise StepSizeUnderflow(t, h)

    logger.debug(f"积分完成: {accepted} 个接受步，共 {steps} 次尝试，{len(out_t)} 个样本")
    if not out_t:
        return Trajectory(np.empty(0), np.empty((0, n)), tuple(events))
    return Trajectory(np.array(out_t), np.array(out_y), tuple(events))


def integrate_rk4(rhs: Rhs, y0: Sequence[float], sample_times: Sequence[float],
                  substeps: int = 20) -> Trajectory:
    """定步长经典 RK4，每个采样间隔等分为 substeps 步"""
    samples = _check_grid((sample_times[0], sample_times[-1]), sample_times)
    if substeps < 1:
        raise ConfigError(f"子步数必须为正: {substeps}")
    y = np.array(y0, dtype=float).reshape(-1)
    out = [y.copy()]
    for a, b in zip(samples[:-1], samples[1:]):
        h = (b - a) / substeps
        t = a
        for _ in range(substeps):
            k1 = _evaluate(rhs, t, y)
            k2 = _evaluate(rhs, t + h / 2, y + h / 2 * k1)
            k3 = _evaluate(rhs, t + h / 2, y + h / 2 * k2)
            k4 = _evaluate(rhs, t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        out.append(y.copy())
    return Trajectory(samples, np.array(out))
