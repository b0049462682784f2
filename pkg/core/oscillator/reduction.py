"""可解的含时谐振子：Caldirola–Kanai 的自治化与两族可解频率

CK 振子经判据给出的缩放 x' = √G·x, p' = p/√G 化为常系数系统；
F(t) = 1/(−Kω₀t+K')² 族直接满足判据；F(t) = (u₁t+u₀)⁻⁴ 族经三角规范曲线
[[1/V, 0], [−u₁, V]] 与时间重参数化 τ = ∫V⁻² 化为自治振子。
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from core.errors import OscillatorError, PoleInIntervalError
from core.exprfn import TimeExpr, const, var
from core.numerics import DEFAULT_CONFIG, IntegratorConfig, Trajectory, constancy, integrate_ode, quad
from core.oscillator.spec import OscillatorSpec, hamilton_rhs, to_sl2_coeffs
from core.riccati import IntegrabilityReport, check_integrability
from core.sl2 import GaugeCurve, Mat2, Sl2Coeffs, expm_traceless, fundamental_solution, gauge_transform
from core.utils.logger import log_operation

logger = logging.getLogger(__name__)

T = var('t')
AUDIT_TOL = 1e-6


@dataclass(frozen=True)
class CkReduction:
    """CK 振子的自治化结果

    matrix 为常数矩阵 A'，gauge 为 diag(√G, 1/√G)，transformed 为规范变换后的系数。
    """

    m0: float
    mu: float
    omega0: float
    matrix: Mat2
    gauge: GaugeCurve
    transformed: Sl2Coeffs
    report: IntegrabilityReport

    def to_reduced(self, t: float, x: float, p: float) -> Tuple[float, float]:
        m = self.gauge.at(t)
        return m.a * x, m.d * p

    def from_reduced(self, t: float, xr: float, pr: float) -> Tuple[float, float]:
        m = self.gauge.at(t)
        return xr / m.a, pr / m.d

    def solve(self, x0: float, p0: float, t: float, t0: float = 0.0) -> Tuple[float, float]:
        """经常系数矩阵指数求 (x(t), p(t))"""
        return _evolve_with(self.matrix, self, x0, p0, t, t0)


def _evolve_with(matrix: Mat2, red: CkReduction, x0: float, p0: float, t: float, t0: float) -> Tuple[float, float]:
    xr, pr = red.to_reduced(t0, x0, p0)
    xr_t, pr_t = expm_traceless(matrix, t - t0).apply([xr, pr])
    return red.from_reduced(t, float(xr_t), float(pr_t))


def reduce_ck_autonomous(m0: float, mu: float, omega0: float,
                         interval: Tuple[float, float] = (0.0, 10.0),
                         grid_points: int = 200) -> CkReduction:
    """由判据的缩放因子构造规范曲线并化为常系数

    Raises:
        OscillatorError: ω₀ ≤ 0，或变换后的系数不是常数
    """
    if omega0 <= 0:
        raise OscillatorError(f"ω₀ 必须为正: {omega0}")
    spec = OscillatorSpec.caldirola_kanai(m0, mu, omega0)
    coeffs = to_sl2_coeffs(spec)
    grid = np.linspace(interval[0], interval[1], grid_points)
    report = check_integrability(coeffs, grid)

    gauge = report.scaling_gauge()
    transformed = gauge_transform(coeffs, gauge)
    samples = transformed.sample(grid)
    for i, name in enumerate(('b0', 'b1', 'b2')):
        if not constancy(samples[:, i], 1e-8).is_constant:
            raise OscillatorError(f"规范变换后 {name} 不是常数")
    mean = samples.mean(axis=0)
    matrix = Mat2(0.5 * mean[1], mean[0], -mean[2], -0.5 * mean[1])
    logger.info(f"CK 自治化: b'=({mean[0]:.12g}, {mean[1]:.12g}, {mean[2]:.12g})，K={report.K:.12g}")
    return CkReduction(m0, mu, omega0, matrix, gauge, transformed, report)


@dataclass(frozen=True)
class DiagonalAudit:
    """约化矩阵对角元候选值与数值解的比较"""

    derived: float
    errors: Dict[str, float]
    matched: Optional[str]

    def lines(self):
        yield f"derived_diagonal={self.derived:.12g}"
        for name, err in self.errors.items():
            flag = 'match' if name == self.matched else 'mismatch'
            yield f"candidate {name}: max_rel_err={err:.3e} {flag}"


@log_operation("CK 对角元核查")
def ck_diagonal_audit(m0: float, mu: float, omega0: float, t1: float = 10.0,
                      x0: float = 1.0, p0: float = 0.0, points: int = 201,
                      config: IntegratorConfig = DEFAULT_CONFIG) -> DiagonalAudit:
    """比较对角元 ±μ 与 ±μ/2 四种候选矩阵的解与直接数值积分，报告吻合者"""
    red = reduce_ck_autonomous(m0, mu, omega0, (0.0, t1))
    grid = np.linspace(0.0, t1, points)
    oracle = integrate_ode(hamilton_rhs(OscillatorSpec.caldirola_kanai(m0, mu, omega0)),
                           [x0, p0], (0.0, t1), grid, config)
    scale = np.maximum(1.0, np.abs(oracle.states))

    candidates = {'+mu/2': 0.5 * mu, '-mu/2': -0.5 * mu, '+mu': mu, '-mu': -mu}
    errors = {}
    for name, diag in candidates.items():
        m = Mat2(diag, omega0, -omega0, -diag)
        states = np.array([_evolve_with(m, red, x0, p0, float(t), 0.0) for t in grid])
        errors[name] = float(np.max(np.abs(states - oracle.states) / scale))

    best = min(errors, key=errors.get)
    matched = best if errors[best] <= AUDIT_TOL else None
    audit = DiagonalAudit(red.matrix.a, errors, matched)
    for line in audit.lines():
        logger.info(f"CK 对角元核查: {line}")
    return audit


# ---------------------------------------------------------------- 频率族

def solvable_frequency_family(K: float, Kprime: float, omega0: float,
                              interval: Tuple[float, float] = (0.0, 1.0)) -> OscillatorSpec:
    """F(t) = 1/(−Kω₀t + K')²

    Raises:
        PoleInIntervalError: −Kω₀t + K' 在区间内为零
    """
    slope = -K * omega0
    if slope == 0.0:
        if Kprime == 0.0:
            raise PoleInIntervalError(interval[0], interval)
    else:
        pole = -Kprime / slope
        if interval[0] <= pole <= interval[1]:
            raise PoleInIntervalError(pole, interval)
    F = 1 / (slope * T + Kprime) ** 2
    return OscillatorSpec.td_frequency(F, omega0, K=K, Kprime=Kprime)


@dataclass(frozen=True)
class QuarticReduction:
    """F(t) = V⁻⁴，V(t) = u₁t + u₀"""

    u0: float
    u1: float
    omega0: float

    @property
    def V(self) -> TimeExpr:
        return self.u1 * T + self.u0

    def v_at(self, t: float) -> float:
        return self.u1 * t + self.u0

    def pole(self) -> Optional[float]:
        if self.u1 == 0.0:
            return None if self.u0 != 0.0 else 0.0
        return -self.u0 / self.u1

    def check_interval(self, t0: float, t1: float) -> None:
        pole = self.pole()
        lo, hi = min(t0, t1), max(t0, t1)
        if pole is not None and lo <= pole <= hi:
            raise PoleInIntervalError(pole, (t0, t1))

    def tau(self, t: float, tol: float = 1e-12) -> float:
        """τ(t) = ∫₀ᵗ V⁻²，数值积分"""
        self.check_interval(0.0, t)
        return quad(lambda s: 1.0 / self.v_at(s) ** 2, 0.0, t, tol)

    def tau_closed(self, t: float) -> float:
        """τ = t/(u₀(u₁t+u₀))"""
        return t / (self.u0 * self.v_at(t))


def quartic_family_spec(u0: float, u1: float, omega0: float) -> OscillatorSpec:
    q = QuarticReduction(u0, u1, omega0)
    return OscillatorSpec.td_frequency(q.V ** -4, omega0, u0=u0, u1=u1)


def triangular_gauge(u0: float, u1: float) -> GaugeCurve:
    """[[1/V, 0], [−u₁, V]]，把 (1, 0, ω₀²V⁻⁴) 化为 V⁻²(1, 0, ω₀²)"""
    V = QuarticReduction(u0, u1, 1.0).V
    return GaugeCurve(1 / V, const(0.0), const(-u1), V)


def quartic_reduction_state(q: QuarticReduction, x0: float, p0: float, t: float) -> Tuple[float, float]:
    """闭式解 (x(t), ẋ(t))"""
    tau = q.tau(t)
    if q.u1 != 0.0:
        closed = q.tau_closed(t)
        if abs(closed - tau) > 1e-9 * max(1.0, abs(closed)):
            logger.warning(f"τ 数值积分与闭式不符: {tau:.15g} vs {closed:.15g}")
    v0, vt, w = q.v_at(0.0), q.v_at(t), q.omega0
    xr0, pr0 = x0 / v0, -q.u1 * x0 + v0 * p0
    c, s = math.cos(w * tau), math.sin(w * tau)
    xr = c * xr0 + s * pr0 / w
    pr = -w * s * xr0 + c * pr0
    return vt * xr, pr / vt + q.u1 * xr


def quartic_reduction_solve(q: QuarticReduction, x0: float, p0: float, t: float) -> float:
    """x(t) = V(t)(cos(ω₀τ)x₀/V(0) + sin(ω₀τ)(−u₁x₀ + V(0)p₀)/ω₀)"""
    return quartic_reduction_state(q, x0, p0, t)[0]


def fundamental_linear_solve(coeffs: Sl2Coeffs, x0: float, p0: float, t_span: Tuple[float, float],
                             sample_times: Optional[Sequence[float]] = None,
                             config: IntegratorConfig = DEFAULT_CONFIG) -> Trajectory:
    """基本解对相空间初值的线性作用"""
    curve = fundamental_solution(coeffs, t_span, sample_times, config)
    return Trajectory(curve.times, curve.act_linear([x0, p0]))
