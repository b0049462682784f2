"""命令行入口：lie integrate | check | superpose | presets | config

标准输出只写 CSV 或报告；诊断信息写标准错误。
退出码：0 成功/可积，1 判据拒绝，2 用法错误，3 数值或退化失败。
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from cli.commands import ALL_METHODS, CONFIG_ACTIONS, RULES, RUNNERS, RunConfig, Settings
from cli.output import diagnostic, emit, init_output
from cli.sweep import run_sweep
from core.errors import EXIT_USAGE, ConfigError, LieSystemError
from core.utils.logger import handle_error, setup_logging

logger = logging.getLogger(__name__)

PROG = 'lie'

OPERATIONS = {
    'integrate': '积分',
    'check': '判据检验',
    'superpose': '叠加重建',
    'presets': '预设列表',
    'config': '用户配置',
}

STATE_FLAGS = ('x0', 'v0', 'y0', 'vy0', 'z0', 'vz0')
COEFFICIENT_FLAGS = ('b0', 'b1', 'b2', 'm', 'omega2')


def _floats(count: int):
    """逗号分隔的 count 个实数"""
    def convert(text: str) -> Tuple[float, ...]:
        try:
            values = tuple(float(v) for v in text.split(','))
        except ValueError:
            raise argparse.ArgumentTypeError(f"无法解析为实数: {text!r}")
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"需要 {count} 个逗号分隔的实数: {text!r}")
        return values
    return convert


def _param(text: str) -> Tuple[str, str]:
    name, sep, value = text.partition('=')
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"参数格式应为 name=value: {text!r}")
    return name.strip(), value.strip()


def _verbose_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    # SUPPRESS 使子命令未给出时不覆盖主解析器的值
    parent.add_argument('-v', '--verbose', action='store_true', default=argparse.SUPPRESS,
                        help='在控制台输出 INFO 级日志')
    return parent


def _problem_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    source = parent.add_argument_group('问题来源（三选一）')
    source.add_argument('--preset', help='预设名，见 lie presets')
    source.add_argument('--riccati', action='store_true', help='由 --b0 --b1 --b2 给出 Riccati 方程')
    source.add_argument('--oscillator', action='store_true', help='由 --m --omega2 给出谐振子')
    for name in COEFFICIENT_FLAGS:
        source.add_argument(f'--{name}', metavar='EXPR', help=f'系数 {name}(t) 的表达式')
    source.add_argument('--param', action='append', type=_param, default=[], metavar='NAME=VALUE',
                        help='覆盖预设参数，可重复')

    run = parent.add_argument_group('运行参数')
    run.add_argument('--t0', type=float, default=0.0, help='起始时间（默认 0）')
    run.add_argument('--t1', type=float, default=1.0, help='终止时间（默认 1）')
    run.add_argument('-n', '--samples', type=int, default=101, help='采样点数（默认 101）')
    run.add_argument('--rtol', type=float, help='相对容差，覆盖配置文件')
    run.add_argument('--atol', type=float, help='绝对容差，覆盖配置文件')
    run.add_argument('--out', metavar='PATH', help='输出文件，默认标准输出')
    run.add_argument('--seed', type=int, help='随机种子（u64）')
    run.add_argument('--sweep', metavar='NAME=A:B:N', help='参数扫描')

    state = parent.add_argument_group('初值')
    for name in STATE_FLAGS:
        state.add_argument(f'--{name}', type=float)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description='SL(2,ℝ) Lie 系统：Riccati 方程、含时谐振子、Milne–Pinney 与 Ermakov 系统',
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='在控制台输出 INFO 级日志')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    verbose, problem = _verbose_parent(), _problem_parent()

    p = sub.add_parser('integrate', parents=[verbose, problem], help='积分并输出轨迹 CSV')
    p.add_argument('--method', choices=ALL_METHODS,
                   help='Riccati: charts|mobius|criterion；振子: numeric|fundamental|reduced')
    p.add_argument('--matrix-out', metavar='PATH', help='另把基本解矩阵 t,a,b,c,d 写到 PATH（Riccati 或振子）')

    p = sub.add_parser('check', parents=[verbose, problem], help='检验可积性判据')
    p.add_argument('--audit', action='store_true', help='附加 Caldirola–Kanai 对角元核查')

    p = sub.add_parser('superpose', parents=[verbose, problem], help='由叠加规则重建解并与直接积分比较')
    p.add_argument('--rule', required=True, choices=RULES)
    p.add_argument('--k', type=float, help='交比常数或部分叠加的 k')
    p.add_argument('--k1', type=float, default=1.0)
    p.add_argument('--k2', type=float, default=1.0)
    p.add_argument('--kprime', type=float, default=1.0, help="部分叠加的 k'")
    p.add_argument('--seeds', type=_floats(3), metavar='X1,X2,X3', help='交比规则的三个种子初值')
    p.add_argument('--seed1', type=_floats(2), metavar='X,V', help='第一个种子解 (x, v)')
    p.add_argument('--seed2', type=_floats(2), metavar='X,V', help='第二个种子解 (x, v)')

    sub.add_parser('presets', parents=[verbose], help='列出预设')

    p = sub.add_parser('config', parents=[verbose], help='查看或修改用户配置')
    p.add_argument('action', nargs='?', default='show', choices=CONFIG_ACTIONS)
    p.add_argument('name', nargs='?', metavar='SECTION.KEY', help='配置项，show 时也可只给节名')
    p.add_argument('value', nargs='?', help='set 写入的值')
    return parser


def _collect(ns: argparse.Namespace, names: Sequence[str]) -> Dict[str, object]:
    return {name: getattr(ns, name) for name in names if getattr(ns, name, None) is not None}


def config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    if ns.command == 'presets':
        return RunConfig(command='presets')
    if ns.command == 'config':
        return RunConfig(command='config', config_action=ns.action, config_name=ns.name,
                         config_value=ns.value)
    params = {}
    for name, value in ns.param:
        if name in params:
            raise ConfigError(f"参数 {name} 重复给出")
        params[name] = value
    return RunConfig(
        command=ns.command,
        preset=ns.preset,
        riccati=ns.riccati,
        oscillator=ns.oscillator,
        coefficients=_collect(ns, COEFFICIENT_FLAGS),
        params=params,
        state=_collect(ns, STATE_FLAGS),
        t0=ns.t0,
        t1=ns.t1,
        samples=ns.samples,
        rtol=ns.rtol,
        atol=ns.atol,
        out=ns.out,
        seed=ns.seed,
        method=getattr(ns, 'method', None),
        rule=getattr(ns, 'rule', None),
        k=getattr(ns, 'k', None),
        k1=getattr(ns, 'k1', 1.0),
        k2=getattr(ns, 'k2', 1.0),
        kprime=getattr(ns, 'kprime', 1.0),
        seeds=getattr(ns, 'seeds', None) or (),
        seed1=getattr(ns, 'seed1', None),
        seed2=getattr(ns, 'seed2', None),
        audit=getattr(ns, 'audit', False),
        sweep=ns.sweep,
        matrix_out=getattr(ns, 'matrix_out', None),
    )


def execute(cfg: RunConfig, settings: Optional[Settings] = None) -> int:
    runner = RUNNERS[cfg.command]
    if cfg.command in ('presets', 'config'):
        text, code = runner(cfg)
        emit(text)
        return code
    settings = settings or Settings.load()
    if cfg.sweep:
        text, code = run_sweep(cfg, settings, runner)
    else:
        text, code = runner(cfg, settings)
    emit(text, cfg.out)
    return code


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的用法错误为 2，--help 为 0
        return int(e.code or 0)

    setup_logging(ns.verbose)
    init_output()
    if ns.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    try:
        return execute(config_from_namespace(ns))
    except LieSystemError as e:
        diagnostic(str(e))
        return handle_error(logger, ns.command, e, OPERATIONS[ns.command])
