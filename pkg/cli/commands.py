"""CLI 命令：积分、判据检验、叠加重建、预设列表、用户配置

每个命令接收 RunConfig 与 Settings，返回 (输出文本, 退出码)；
判据拒绝以外的异常向上抛出，由 app 层映射为退出码。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from cli.presets import BoundPreset, Preset, PresetRegistry
from core.config.user_config import UserConfigManager
from core.errors import (
    EXIT_OK, EXIT_REJECTED, ConfigError, CriterionRejected, ErmakovError,
)
from core.ermakov import (
    ErmakovState, GeneralizedErmakovSpec, PinneySpec, ermakov_invariant, ermakov_rhs,
    generalized_invariant, generalized_rhs, integrate_pinney, pinney_from_oscillators,
    triple_invariants, triple_rhs, zero_guard,
)
from core.exprfn import TimeExpr
from core.numerics import (
    EventKind, HermiteInterpolant, IntegratorConfig, Trajectory, constancy, integrate_ode,
)
from core.oscillator import (
    OscillatorSpec, QuarticReduction, ck_diagonal_audit, fundamental_linear_solve, hamilton_rhs,
    linear_superposition, oscillator_pair_rhs, partial_superposition, quartic_reduction_state,
    reduce_ck_autonomous, to_sl2_coeffs,
)
from core.riccati import (
    RiccatiProblem, check_integrability, cross_ratio, projective_distance, solve_numeric,
    solve_via_criterion, superpose_cross_ratio,
)
from core.sl2 import Sl2Coeffs, fundamental_solution
from core.utils.logger import log_operation

logger = logging.getLogger(__name__)

COMMANDS = ('integrate', 'check', 'superpose', 'presets', 'config')
CONFIG_ACTIONS = ('show', 'set', 'reset')
RULES = ('cross-ratio', 'linear', 'partial', 'pinney')

# 每类问题可选的求解方法，第一个为默认
METHODS: Dict[str, Tuple[str, ...]] = {
    'riccati': ('charts', 'mobius', 'criterion'),
    'oscillator': ('numeric', 'fundamental', 'reduced'),
}
ALL_METHODS = ('charts', 'mobius', 'criterion', 'numeric', 'fundamental', 'reduced')

# 初值键，按状态分量顺序；振子的 v0 即动量 p0
STATE_KEYS: Dict[str, Tuple[str, ...]] = {
    'riccati': ('x0',),
    'oscillator': ('x0', 'v0'),
    'pinney': ('x0', 'v0'),
    'ermakov': ('x0', 'v0', 'y0', 'vy0'),
    'ermakov_generalized': ('x0', 'v0', 'y0', 'vy0'),
    'oscillator_pair': ('x0', 'v0', 'y0', 'vy0'),
    'pinney_triple': ('x0', 'v0', 'y0', 'vy0', 'z0', 'vz0'),
}

EXPLICIT_KEYS = {
    'riccati': ('b0', 'b1', 'b2'),
    'oscillator': ('m', 'omega2'),
}

SEED_MAX = 2 ** 64


@dataclass(frozen=True)
class Settings:
    """来自用户配置文件的运行参数"""

    integrator: IntegratorConfig
    constancy_tol: float
    grid_points: int
    num_threads: int

    @classmethod
    def load(cls, manager: Optional[UserConfigManager] = None) -> 'Settings':
        manager = manager or UserConfigManager()
        return cls(
            integrator=manager.get_integrator_config(),
            constancy_tol=manager.get_constancy_tol(),
            grid_points=manager.get_grid_points(),
            num_threads=manager.get_num_threads(),
        )


@dataclass(frozen=True)
class RunConfig:
    """一次命令运行的完整配置

    问题来源三选一：--preset、--riccati（b0, b1, b2）、--oscillator（m, omega2）。
    """

    command: str
    preset: Optional[str] = None
    riccati: bool = False
    oscillator: bool = False
    coefficients: Mapping[str, str] = field(default_factory=dict)
    params: Mapping[str, str] = field(default_factory=dict)
    state: Mapping[str, float] = field(default_factory=dict)
    t0: float = 0.0
    t1: float = 1.0
    samples: int = 101
    rtol: Optional[float] = None
    atol: Optional[float] = None
    out: Optional[str] = None
    seed: Optional[int] = None
    method: Optional[str] = None
    rule: Optional[str] = None
    k: Optional[float] = None
    k1: float = 1.0
    k2: float = 1.0
    kprime: float = 1.0
    seeds: Tuple[float, ...] = ()
    seed1: Optional[Tuple[float, float]] = None
    seed2: Optional[Tuple[float, float]] = None
    audit: bool = False
    sweep: Optional[str] = None
    matrix_out: Optional[str] = None
    config_action: str = 'show'
    config_name: Optional[str] = None
    config_value: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"未知命令: {self.command}")
        if self.command == 'presets':
            return
        if self.command == 'config':
            self._check_config_args()
            return

        sources = sum([self.preset is not None, self.riccati, self.oscillator])
        if sources != 1:
            raise ConfigError("必须且只能指定 --preset、--riccati、--oscillator 之一")
        if self.preset is not None and self.coefficients:
            raise ConfigError(f"--preset 不能与显式系数同时使用: {', '.join(self.coefficients)}")
        if self.samples < 2:
            raise ConfigError(f"采样点数至少为 2: {self.samples}")
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)) or self.t1 <= self.t0:
            raise ConfigError(f"时间区间无效: [{self.t0}, {self.t1}]")
        for name in ('rtol', 'atol'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"--{name} 必须为正: {value}")
        if self.seeds and len(self.seeds) != 3:
            raise ConfigError(f"--seeds 需要 3 个值，实际 {len(self.seeds)} 个")
        if self.seed is not None and not 0 <= self.seed < SEED_MAX:
            raise ConfigError(f"--seed 超出 u64 范围: {self.seed}")
        if self.method is not None and self.method not in ALL_METHODS:
            raise ConfigError(f"未知求解方法: {self.method}")
        if self.command == 'superpose' and self.rule not in RULES:
            raise ConfigError(f"未知叠加规则: {self.rule}（可选: {', '.join(RULES)}）")
        if self.matrix_out and self.sweep:
            raise ConfigError("--matrix-out 不能与 --sweep 同时使用")

    def _check_config_args(self):
        if self.config_action not in CONFIG_ACTIONS:
            raise ConfigError(f"未知配置操作: {self.config_action}（可选: {', '.join(CONFIG_ACTIONS)}）")
        if self.config_action == 'set' and (self.config_name is None or self.config_value is None):
            raise ConfigError("lie config set 需要 SECTION.KEY 与 VALUE")
        if self.config_action != 'set' and self.config_value is not None:
            raise ConfigError(f"lie config {self.config_action} 不接受 VALUE")
        if self.config_action == 'reset' and self.config_name is not None:
            raise ConfigError("lie config reset 不接受 SECTION.KEY")

    @property
    def t_span(self) -> Tuple[float, float]:
        return self.t0, self.t1

    def grid(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.samples)

    def integrator(self, settings: Settings) -> IntegratorConfig:
        """配置文件的积分器参数，命令行容差优先"""
        return settings.integrator.with_overrides(rtol=self.rtol, atol=self.atol)

    def with_param(self, name: str, value: str) -> 'RunConfig':
        """参数扫描中的单次运行"""
        return replace(self, params={**self.params, name: value}, sweep=None)


# ---------------------------------------------------------------- 问题来源

def explicit_preset(cfg: RunConfig) -> Preset:
    """把 --riccati / --oscillator 的系数包装成无参数预设"""
    kind = 'riccati' if cfg.riccati else 'oscillator'
    allowed = EXPLICIT_KEYS[kind]
    extra = sorted(set(cfg.coefficients) - set(allowed))
    if extra:
        raise ConfigError(f"--{kind} 不接受系数: {', '.join(extra)}")

    if kind == 'riccati':
        expressions = {key: cfg.coefficients.get(key, '0') for key in allowed}
        return Preset('riccati', 'riccati', '显式 Riccati 系数', ('x',), {}, expressions, {'x0': 0.0})
    if 'omega2' not in cfg.coefficients:
        raise ConfigError("--oscillator 需要 --omega2")
    expressions = {'m': cfg.coefficients.get('m', '1'), 'omega2': cfg.coefficients['omega2']}
    return Preset('oscillator', 'oscillator', '显式振子系数', ('x', 'p'), {}, expressions,
                  {'x0': 1.0, 'v0': 0.0})


def resolve(cfg: RunConfig) -> BoundPreset:
    preset = PresetRegistry.get_instance().get(cfg.preset) if cfg.preset else explicit_preset(cfg)
    return preset.bind(cfg.params)


def initial_state(bound: BoundPreset, cfg: RunConfig) -> List[float]:
    keys = STATE_KEYS[bound.kind]
    unknown = sorted(set(cfg.state) - set(keys))
    if unknown:
        raise ConfigError(f"{bound.preset.name} 不接受初值: {', '.join(unknown)}（可用: {', '.join(keys)}）")
    values = []
    for key in keys:
        if key in cfg.state:
            values.append(float(cfg.state[key]))
        elif key in bound.preset.initial:
            values.append(bound.preset.initial[key])
        else:
            raise ConfigError(f"缺少初值 --{key}")
    return values


def riccati_coeffs(bound: BoundPreset) -> Sl2Coeffs:
    return Sl2Coeffs.of(bound.expr('b0'), bound.expr('b1'), bound.expr('b2'))


def oscillator_spec(bound: BoundPreset) -> OscillatorSpec:
    return OscillatorSpec.generic(bound.expr('m'), bound.expr('omega2'))


def sl2_coeffs(bound: BoundPreset) -> Sl2Coeffs:
    if bound.kind == 'riccati':
        return riccati_coeffs(bound)
    if bound.kind == 'oscillator':
        return to_sl2_coeffs(oscillator_spec(bound))
    raise ConfigError(f"{bound.preset.name} 不是 Riccati 或谐振子问题")


def _require_kind(bound: BoundPreset, kinds: Tuple[str, ...], what: str) -> None:
    if bound.kind not in kinds:
        raise ConfigError(f"{what}需要 {' 或 '.join(kinds)} 类问题，{bound.preset.name} 是 {bound.kind}")


def _method(bound: BoundPreset, cfg: RunConfig) -> str:
    choices = METHODS.get(bound.kind, ('numeric',))
    method = cfg.method or choices[0]
    if method not in choices:
        raise ConfigError(f"{bound.kind} 类问题不支持方法 {method}（可选: {', '.join(choices)}）")
    return method


# ---------------------------------------------------------------- 不变量列

def _generalized_spec(bound: BoundPreset) -> GeneralizedErmakovSpec:
    return GeneralizedErmakovSpec(bound.expr('f'), bound.expr('g'), bound.expr('omega2'),
                                  bound.number('base'))


def _energy(bound: BoundPreset) -> Optional[Callable[[float, np.ndarray], float]]:
    """½v² + ½ω²x² + ½k/x²，只在 ω² 不含 t 时守恒"""
    k, w2 = bound.number('k'), bound.expr('omega2')
    if 't' in w2.free_variables():
        logger.info(f"ω² = {w2} 含时，能量不守恒，不输出 energy 列")
        return None

    def value(t: float, s: np.ndarray) -> float:
        if s[0] == 0.0:
            raise ErmakovError("x = 0，能量无定义")
        return 0.5 * s[1] ** 2 + 0.5 * w2.at(t) * s[0] ** 2 + 0.5 * k / s[0] ** 2
    return value


def _psi(bound: BoundPreset):
    k = bound.number('k')
    return lambda t, s: ermakov_invariant(ErmakovState(*s), k)


def _generalized(bound: BoundPreset):
    spec = _generalized_spec(bound)
    return lambda t, s: generalized_invariant(spec, ErmakovState(*s))


def _triple(index: int):
    def build(bound: BoundPreset):
        k = bound.number('k')
        return lambda t, s: triple_invariants(ErmakovState(*s), k)[index]
    return build


def _wronskian(bound: BoundPreset):
    return lambda t, s: s[0] * s[3] - s[2] * s[1]


# 构造器返回 None 表示该不变量对当前参数不成立，不输出此列
INVARIANTS: Dict[str, Callable[[BoundPreset], Optional[Callable[[float, np.ndarray], float]]]] = {
    'energy': _energy,
    'psi': _psi,
    'generalized': _generalized,
    'I1': _triple(0),
    'I2': _triple(1),
    'W': _triple(2),
    'wronskian': _wronskian,
}


def invariant_columns(bound: BoundPreset, traj: Trajectory) -> Dict[str, np.ndarray]:
    """按预设声明的不变量逐样本求值；无定义处记 nan"""
    columns = {}
    for name in bound.preset.invariants:
        if name not in INVARIANTS:
            raise ConfigError(f"预设 {bound.preset.name} 声明了未知不变量 {name}")
        fn = INVARIANTS[name](bound)
        if fn is None:
            continue
        values = np.full(len(traj), np.nan)
        for i, (t, s) in enumerate(zip(traj.times, traj.states)):
            try:
                values[i] = fn(float(t), s)
            except ErmakovError as e:
                logger.warning(f"不变量 {name} 在 t={t:.12g} 处无定义: {e}")
        columns[name] = values
    return columns


# ---------------------------------------------------------------- integrate

def _system_rhs(bound: BoundPreset):
    omega2 = bound.expr('omega2')
    if bound.kind == 'ermakov':
        return ermakov_rhs(omega2, bound.number('k'))
    if bound.kind == 'ermakov_generalized':
        return generalized_rhs(_generalized_spec(bound))
    if bound.kind == 'pinney_triple':
        return triple_rhs(omega2, bound.number('k'))
    if bound.kind == 'oscillator_pair':
        return oscillator_pair_rhs(omega2)
    raise ConfigError(f"无法积分 {bound.kind} 类问题")


def _system_guard(kind: str):
    """Pinney 变量所在分量接近零时停止"""
    if kind == 'ermakov':
        return zero_guard(2)
    if kind == 'pinney_triple':
        return zero_guard(0)
    if kind == 'ermakov_generalized':
        gx, gy = zero_guard(0), zero_guard(2)
        return lambda t, y: gx(t, y) or gy(t, y)
    return None


def _reduced_oscillator(bound: BoundPreset, cfg: RunConfig, state: List[float],
                        settings: Settings) -> Trajectory:
    x0, p0 = state
    grid = cfg.grid()
    name = bound.preset.name
    if name == 'caldirola-kanai':
        red = reduce_ck_autonomous(bound.number('m0'), bound.number('mu'), bound.number('omega0'),
                                   cfg.t_span, settings.grid_points)
        states = [red.solve(x0, p0, float(t), cfg.t0) for t in grid]
    elif name == 'quartic-family':
        if cfg.t0 != 0.0:
            raise ConfigError("quartic-family 的约化解要求 t0 = 0")
        q = QuarticReduction(bound.number('u0'), bound.number('u1'), bound.number('omega0'))
        q.check_interval(cfg.t0, cfg.t1)
        states = [quartic_reduction_state(q, x0, p0, float(t)) for t in grid]
    else:
        raise ConfigError(f"约化解只适用于 caldirola-kanai 与 quartic-family，当前为 {name}")
    return Trajectory(grid, np.array(states))


def integrate(bound: BoundPreset, cfg: RunConfig, settings: Settings) -> Trajectory:
    state = initial_state(bound, cfg)
    grid, conf = cfg.grid(), cfg.integrator(settings)
    method = _method(bound, cfg)

    if bound.kind == 'riccati':
        problem = RiccatiProblem(riccati_coeffs(bound), state[0], cfg.t_span)
        if method == 'criterion':
            return solve_via_criterion(problem, grid, settings.constancy_tol, settings.grid_points)
        return solve_numeric(problem, grid, conf, method)

    if bound.kind == 'oscillator':
        spec = oscillator_spec(bound)
        spec.check_mass(grid)
        if method == 'reduced':
            return _reduced_oscillator(bound, cfg, state, settings)
        if method == 'fundamental':
            return fundamental_linear_solve(to_sl2_coeffs(spec), state[0], state[1], cfg.t_span, grid, conf)
        return integrate_ode(hamilton_rhs(spec), state, cfg.t_span, grid, conf)

    if bound.kind == 'pinney':
        spec = PinneySpec.of(bound.number('k'), bound.expr('omega2'))
        return integrate_pinney(spec, state[0], state[1], cfg.t_span, grid, conf)

    return integrate_ode(_system_rhs(bound), state, cfg.t_span, grid, conf, _system_guard(bound.kind))


def write_fundamental(bound: BoundPreset, cfg: RunConfig, settings: Settings) -> None:
    """把基本解矩阵曲线 t,a,b,c,d 写到 --matrix-out"""
    _require_kind(bound, ('riccati', 'oscillator'), '--matrix-out ')
    curve = fundamental_solution(sl2_coeffs(bound), cfg.t_span, cfg.grid(), cfg.integrator(settings))
    try:
        curve.to_csv(cfg.matrix_out)
    except OSError as e:
        raise ConfigError(f"无法写入矩阵文件 {cfg.matrix_out}: {e}") from e
    if len(curve) < cfg.samples:
        logger.warning(f"基本解在 t={curve.times[-1]:.12g} 处提前停止，写出 {len(curve)}/{cfg.samples} 行")


@log_operation("积分命令")
def cmd_integrate(cfg: RunConfig, settings: Settings) -> Tuple[str, int]:
    bound = resolve(cfg)
    traj = integrate(bound, cfg, settings)
    if len(traj) < cfg.samples:
        logger.warning(f"积分在 t={traj.t_end:.12g} 处提前停止，输出 {len(traj)}/{cfg.samples} 行")
    for event in traj.events:
        if event.kind == EventKind.DOMAIN:
            logger.warning(f"t={event.time:.12g} 处越出定义域")
    if cfg.matrix_out:
        write_fundamental(bound, cfg, settings)
    return traj.to_csv(extra=invariant_columns(bound, traj)), EXIT_OK


# ---------------------------------------------------------------- check

def _describe(expr: TimeExpr, grid: np.ndarray, tol: float) -> str:
    """网格上为常数时打印数值，否则打印表达式"""
    report = constancy([expr.at(float(t)) for t in grid], tol)
    return f"{report.mean:.12g}" if report.is_constant else str(expr)


def _audit_lines(bound: BoundPreset, cfg: RunConfig, settings: Settings) -> List[str]:
    if bound.preset.name != 'caldirola-kanai':
        raise ConfigError("--audit 只适用于 caldirola-kanai 预设")
    x0, p0 = initial_state(bound, cfg)
    audit = ck_diagonal_audit(bound.number('m0'), bound.number('mu'), bound.number('omega0'),
                              cfg.t1, x0, p0, cfg.samples, cfg.integrator(settings))
    lines = [f"audit {line}" for line in audit.lines()]
    lines.append(f"audit matched={audit.matched or 'none'}")
    return lines


@log_operation("判据检验命令")
def cmd_check(cfg: RunConfig, settings: Settings) -> Tuple[str, int]:
    bound = resolve(cfg)
    coeffs = sl2_coeffs(bound)
    grid = np.linspace(cfg.t0, cfg.t1, settings.grid_points)
    lines: List[str] = []
    code = EXIT_OK
    try:
        report = check_integrability(coeffs, grid, settings.constancy_tol)
    except CriterionRejected as e:
        d = e.diagnostics
        lines.append(f"integrable=no K_mean={d.mean:.12g} max_deviation={d.max_deviation:.3e} tol={d.tol:.1e}")
        code = EXIT_REJECTED
    else:
        target, d = report.target, report.diagnostics
        lines.append(f"K={report.K:.12g} L={report.L:g} D={_describe(target.D, grid, settings.constancy_tol)} "
                     f"integrable=yes")
        lines.append(f"G={report.scaling}")
        lines.append(f"c0={target.c0:g} c1={target.c1:.12g} c2={target.c2:g}")
        lines.append(f"max_deviation={d.max_deviation:.3e} tol={d.tol:.1e}")
    if cfg.audit:
        lines.extend(_audit_lines(bound, cfg, settings))
    return '\n'.join(lines) + '\n', code


# ---------------------------------------------------------------- superpose

def _rng(cfg: RunConfig) -> np.random.Generator:
    return np.random.default_rng(cfg.seed)


def _superpose_cross_ratio(bound: BoundPreset, cfg: RunConfig, settings: Settings):
    _require_kind(bound, ('riccati',), "交比规则")
    coeffs, grid, conf = riccati_coeffs(bound), cfg.grid(), cfg.integrator(settings)
    seeds = cfg.seeds or tuple(float(v) for v in _rng(cfg).uniform(-1.0, 1.0, 3))
    k = cfg.k if cfg.k is not None else cross_ratio(initial_state(bound, cfg)[0], *seeds)
    logger.info(f"交比叠加: 种子 {seeds}，k={k:.12g}")

    def solve(x0: float) -> Trajectory:
        return solve_numeric(RiccatiProblem(coeffs, x0, cfg.t_span), grid, conf)

    trajs = [solve(s) for s in seeds]
    direct = solve(superpose_cross_ratio(*seeds, k))
    xs = np.array([superpose_cross_ratio(a, b, c, k) for a, b, c in
                   zip(*(t.component(0) for t in trajs))])
    residual = np.array([projective_distance(x, d) for x, d in zip(xs, direct.component(0))])
    return Trajectory(grid, xs.reshape(-1, 1)), residual


def _seed(value: Optional[Tuple[float, float]], default: Tuple[float, float]) -> np.ndarray:
    return np.array(value if value is not None else default, dtype=float)


def _superpose_linear(bound: BoundPreset, cfg: RunConfig, settings: Settings):
    _require_kind(bound, ('oscillator',), "线性叠加规则")
    rhs, grid, conf = hamilton_rhs(oscillator_spec(bound)), cfg.grid(), cfg.integrator(settings)
    s1, s2 = _seed(cfg.seed1, (1.0, 0.0)), _seed(cfg.seed2, (0.0, 1.0))
    first = integrate_ode(rhs, s1, cfg.t_span, grid, conf)
    second = integrate_ode(rhs, s2, cfg.t_span, grid, conf)
    sup = linear_superposition(first, second, cfg.k1, cfg.k2)
    direct = integrate_ode(rhs, cfg.k1 * s1 + cfg.k2 * s2, cfg.t_span, grid, conf)
    residual = np.max(np.abs(sup.states - direct.states), axis=1)
    return sup, residual


def _superpose_partial(bound: BoundPreset, cfg: RunConfig, settings: Settings):
    _require_kind(bound, ('oscillator',), "部分叠加规则")
    m = bound.expr('m')
    if m.free_variables() or m.evaluate({}) != 1.0:
        raise ConfigError(f"部分叠加规则要求 m ≡ 1，当前 m = {m}")
    rhs, grid, conf = hamilton_rhs(oscillator_spec(bound)), cfg.grid(), cfg.integrator(settings)
    s1 = _seed(cfg.seed1, (1.0, 0.0))
    k = cfg.k if cfg.k is not None else 1.0

    first = integrate_ode(rhs, s1, cfg.t_span, grid, conf)
    x1 = HermiteInterpolant.from_trajectory(first, rhs, 0)
    xs = np.array([partial_superposition(x1, k, cfg.kprime, float(t), base=cfg.t0) for t in first.times])

    # x₂(t0) = k'x₁(t0)，ẋ₂(t0) = k'ẋ₁(t0) + k/x₁(t0)
    direct = integrate_ode(rhs, [cfg.kprime * s1[0], cfg.kprime * s1[1] + k / s1[0]],
                           cfg.t_span, grid, conf)
    residual = np.abs(xs - direct.component(0))
    return Trajectory(first.times, xs.reshape(-1, 1)), residual


def _superpose_pinney(bound: BoundPreset, cfg: RunConfig, settings: Settings):
    _require_kind(bound, ('pinney', 'pinney_triple'), "Pinney 叠加规则")
    k, omega2 = bound.number('k'), bound.expr('omega2')
    grid, conf = cfg.grid(), cfg.integrator(settings)
    state = initial_state(bound, cfg)
    x0, v0 = state[0], state[1]
    if bound.kind == 'pinney_triple':
        y_default, z_default = tuple(state[2:4]), tuple(state[4:6])
    else:
        y_default, z_default = (1.0, 0.0), (0.0, 1.0)
    ys, zs = _seed(cfg.seed1, y_default), _seed(cfg.seed2, z_default)

    pair = integrate_ode(oscillator_pair_rhs(omega2), np.concatenate([ys, zs]), cfg.t_span, grid, conf)
    ytraj = Trajectory(pair.times, pair.states[:, 0:2])
    ztraj = Trajectory(pair.times, pair.states[:, 2:4])
    traj = pinney_from_oscillators(ytraj, ztraj, x0, v0, k)

    direct = integrate_pinney(PinneySpec.of(k, omega2), x0, v0, cfg.t_span, grid, conf)
    n = min(len(direct), len(traj))
    residual = np.full(len(traj), np.nan)
    xd = direct.component(0)[:n]
    residual[:n] = np.abs(traj.component(0)[:n] - xd) / np.maximum(1.0, np.abs(xd))
    return traj, residual


SUPERPOSE_RULES = {
    'cross-ratio': _superpose_cross_ratio,
    'linear': _superpose_linear,
    'partial': _superpose_partial,
    'pinney': _superpose_pinney,
}


@log_operation("叠加重建命令")
def cmd_superpose(cfg: RunConfig, settings: Settings) -> Tuple[str, int]:
    bound = resolve(cfg)
    traj, residual = SUPERPOSE_RULES[cfg.rule](bound, cfg, settings)
    finite = residual[np.isfinite(residual)]
    if finite.size:
        logger.info(f"叠加规则 {cfg.rule}: 最大残差 {float(np.max(finite)):.3e}")
    return traj.to_csv(extra={'residual': residual}), EXIT_OK


# ---------------------------------------------------------------- presets

def cmd_presets(cfg: RunConfig, settings: Optional[Settings] = None) -> Tuple[str, int]:
    lines = []
    for p in PresetRegistry.get_instance().all():
        params = ' '.join(f"{name}={value}" for name, value in p.parameters.items())
        lines.append(f"{p.name}\t{p.kind}\t{params}")
        if p.description:
            lines.append(f"    {p.description}")
    return '\n'.join(lines) + '\n', EXIT_OK


def cmd_config(cfg: RunConfig, settings: Optional[Settings] = None) -> Tuple[str, int]:
    """show 列出配置，set 写入一项，reset 恢复默认；均输出写后的配置"""
    manager = UserConfigManager()
    if cfg.config_action == 'set':
        manager.set_option(cfg.config_name, cfg.config_value)
        logger.info(f"配置已更新: {cfg.config_name} = {cfg.config_value}")
    elif cfg.config_action == 'reset':
        manager.reset_to_defaults()

    lines = [f"# config,{manager.get_config_file_path()}"]
    for section, items in manager.get_all_settings().items():
        for key, value in items.items():
            name = f"{section}.{key}"
            if cfg.config_name is None or cfg.config_name in (name, section):
                lines.append(f"{name}={value}")
    if len(lines) == 1:
        raise ConfigError(f"未知配置项: {cfg.config_name}")
    return '\n'.join(lines) + '\n', EXIT_OK


RUNNERS = {
    'integrate': cmd_integrate,
    'check': cmd_check,
    'superpose': cmd_superpose,
    'presets': cmd_presets,
    'config': cmd_config,
}
