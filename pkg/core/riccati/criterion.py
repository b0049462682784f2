"""可积性判据：判断 Riccati 方程能否经缩放 y' = G(t)y 与时间重参数化化为常系数方程

接受条件：b₀b₂ 在网格上不为零且不变号，并且
    K(t) = (b₁ + ½(ḃ₂/b₂ − ḃ₀/b₀))·√(L/(b₀b₂)),   L = sign(b₀b₂)
为常数。此时目标方程为 dy'/dt = D(t)(c₀ + c₁y' + c₂y'²)。
"""

import logging
from typing import Optional, Sequence

import numpy as np

from core.errors import CriterionRejected, ExprError, PreconditionError
from core.exprfn import sqrt
from core.numerics import Event, EventKind, Trajectory, constancy, cumulative_quad
from core.numerics.constancy import DEFAULT_CONSTANCY_TOL
from core.riccati.problem import IntegrabilityReport, RiccatiProblem, SolvableTarget
from core.sl2 import INF, Mat2, expm_traceless, is_infinite, mobius
from core.sl2.coeffs import Sl2Coeffs
from core.utils.logger import log_operation

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 200
TAU_QUAD_TOL = 1e-12


def _sign(values: np.ndarray, name: str) -> float:
    if np.any(values == 0.0):
        raise PreconditionError(f"{name} 在网格上为零")
    if np.all(values > 0.0):
        return 1.0
    if np.all(values < 0.0):
        return -1.0
    raise PreconditionError(f"{name} 在网格上变号")


def check_integrability(c: Sl2Coeffs, grid: Optional[Sequence[float]] = None,
                        tol: float = DEFAULT_CONSTANCY_TOL, interval=(0.0, 1.0),
                        grid_points: int = DEFAULT_GRID_POINTS) -> IntegrabilityReport:
    """在网格上检验判据

    Raises:
        PreconditionError: b₀b₂ 在网格上为零或变号，或缩放因子非正
        CriterionRejected: K(t) 不是常数，携带 ConstancyReport 与 K 的样本
    """
    grid = np.linspace(interval[0], interval[1], grid_points) if grid is None else np.asarray(grid, dtype=float)
    try:
        values = c.sample(grid)
        derivs = np.array([c.derivatives(float(t)) for t in grid])
    except ExprError as e:
        raise PreconditionError(f"系数在网格上无法求值: {e}") from e
    b0, b1, b2 = values[:, 0], values[:, 1], values[:, 2]
    db0, db2 = derivs[:, 0], derivs[:, 2]
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
        raise PreconditionError("系数或其导数在网格上非有限")

    product = b0 * b2
    L = _sign(product, "b0·b2")
    s0 = _sign(b0, "b0")

    k_samples = (b1 + 0.5 * (db2 / b2 - db0 / b0)) * np.sqrt(L / product)
    report = constancy(k_samples, tol)
    if not report.is_constant:
        logger.info(f"判据拒绝: K(t) 非常数 ({report})")
        raise CriterionRejected(f"K(t) 不是常数: {report}", diagnostics=report, k_samples=k_samples)

    # c₀ = 1, c₂ = L；D 与 b₀ 同号，故 c₁ = sign(b₀)·K
    scaling = sqrt(c.b2 / (L * c.b0))
    g_values = np.array([scaling.at(float(t)) for t in grid])
    if not np.all(g_values > 0.0):
        raise PreconditionError("缩放因子 G(t) 在网格上非正")

    D = sqrt(L * (c.b0 * c.b2))
    if s0 < 0.0:
        D = -D
    K = report.mean
    target = SolvableTarget(1.0, s0 * K, L, D)
    logger.debug(f"判据接受: K={K:.12g} L={L:+g} D={D} G={scaling}")
    return IntegrabilityReport(K, L, target, scaling, report, grid, k_samples)


def solve_constant_riccati(c0: float, c1: float, c2: float, tau: float, y0: float) -> float:
    """ẏ = c₀ + c₁y + c₂y² 经过时间 τ 的流，作为 exp(τA) 的 Möbius 作用给出

    A = [[c₁/2, c₀], [−c₂, −c₁/2]]；判别式 c₁² − 4c₀c₂ 的符号对应 exp 的双曲/抛物/椭圆情形。
    """
    if c0 == 0.0 and c1 == 0.0 and c2 == 0.0:
        raise PreconditionError("常系数全为零")
    return mobius(expm_traceless(Mat2(0.5 * c1, c0, -c2, -0.5 * c1), tau), y0)


def _denominator(m: Mat2, y0: float) -> float:
    return m.c if is_infinite(y0) else m.c * y0 + m.d


@log_operation("判据求解")
def solve_via_criterion(p: RiccatiProblem, sample_times: Optional[Sequence[float]] = None,
                        tol: float = DEFAULT_CONSTANCY_TOL,
                        grid_points: int = DEFAULT_GRID_POINTS,
                        report: Optional[IntegrabilityReport] = None) -> Trajectory:
    """缩放、重参数化 τ(t) = ∫D、常系数闭式解、反缩放

    Raises:
        CriterionRejected, PreconditionError: 由 check_integrability 传出
    """
    if report is None:
        report = check_integrability(p.coeffs, p.grid(grid_points), tol)
    samples = p.grid(101) if sample_times is None else np.asarray(sample_times, dtype=float).reshape(-1)
    target = report.target
    G = report.scaling

    nodes = samples if samples[0] == p.t0 else np.concatenate([[p.t0], samples])
    taus = np.array(cumulative_quad(target.D, nodes, TAU_QUAD_TOL, variable='t'))
    if nodes.size != samples.size:
        taus = taus[1:]

    y0 = p.x0 if is_infinite(p.x0) else G.at(p.t0) * p.x0
    A = Mat2(0.5 * target.c1, target.c0, -target.c2, -0.5 * target.c1)

    xs, dens = [], []
    for t, tau in zip(samples, taus):
        m = expm_traceless(A, float(tau))
        y = mobius(m, y0)
        dens.append(_denominator(m, y0))
        xs.append(INF if is_infinite(y) else y / G.at(float(t)))

    events = []
    for i, d in enumerate(dens):
        if d == 0.0 or is_infinite(xs[i]):
            events.append(Event(float(samples[i]), EventKind.BLOW_UP))
        elif i > 0 and dens[i - 1] * d < 0.0:
            t_cross = samples[i - 1] + (samples[i] - samples[i - 1]) * dens[i - 1] / (dens[i - 1] - d)
            events.append(Event(float(t_cross), EventKind.BLOW_UP))

    logger.debug(f"判据求解完成: τ(t_end)={float(taus[-1]):.12g}，{len(events)} 个极点")
    return Trajectory(samples, np.array(xs).reshape(-1, 1), tuple(events))
