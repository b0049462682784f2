"""参数扫描：--sweep name=a:b:n 在线程池中逐值运行，按参数顺序合并输出"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from cli.commands import RunConfig, Settings
from core.errors import ConfigError, LieSystemError
from core.numerics.trajectory import FLOAT_FORMAT
from core.utils.logger import handle_error

logger = logging.getLogger(__name__)

Runner = Callable[[RunConfig, Settings], Tuple[str, int]]


@dataclass(frozen=True)
class SweepSpec:
    name: str
    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> 'SweepSpec':
        """解析 name=a:b:n（含端点的 n 个等距值）"""
        name, sep, rng = text.partition('=')
        parts = rng.split(':')
        if not sep or not name.strip() or len(parts) != 3:
            raise ConfigError(f"--sweep 格式应为 name=a:b:n，实际 {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as e:
            raise ConfigError(f"--sweep 取值无法解析: {text!r}") from e
        if count < 1:
            raise ConfigError(f"--sweep 取值个数必须为正: {count}")
        return cls(name.strip(), start, stop, count)

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


def _run_one(runner: Runner, cfg: RunConfig, settings: Settings) -> Tuple[str, int]:
    """单次运行的失败记为注释行，不中断其它取值"""
    try:
        return runner(cfg, settings)
    except LieSystemError as e:
        code = handle_error(logger, f"sweep {dict(cfg.params)}", e, "扫描中的单次运行")
        return f"# error,{e}\n", code


def run_sweep(cfg: RunConfig, settings: Settings, runner: Runner) -> Tuple[str, int]:
    """返回合并后的文本与最大的退出码"""
    spec = SweepSpec.parse(cfg.sweep)
    values = spec.values()
    configs = [cfg.with_param(spec.name, repr(v)) for v in values]
    workers = max(1, min(settings.num_threads, len(configs)))
    logger.info(f"参数扫描 {spec.name}: {len(values)} 个取值，{workers} 个线程")

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_run_one, runner, c, settings) for c in configs]
        results = [f.result() for f in futures]

    blocks = []
    for value, (text, _) in zip(values, results):
        blocks.append(f"# sweep,{spec.name}={FLOAT_FORMAT % value}\n{text}")
    return ''.join(blocks), max(code for _, code in results)


__all__ = ['SweepSpec', 'run_sweep']
