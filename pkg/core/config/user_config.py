"""用户配置

配置文件为 ~/.lie-systems/config.ini，目录可由 LIE_CONFIG_DIR 指定。
每个选项在 OPTIONS 中登记类型、默认值与取值范围；读入时逐项校验，
任何一项不合法就备份原文件并写回默认配置。命令行通过 lie config 读写。
"""

import configparser
import logging
import os
import shutil
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, Optional, Tuple

from core.errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = "LIE_CONFIG_DIR"
NUM_THREADS_ENV = "LIE_NUM_THREADS"
CONFIG_NAME = "config.ini"
MAX_CONFIG_BYTES = 1024 * 1024


@dataclass(frozen=True)
class Option:
    kind: Callable[[str], Any]
    default: str
    check: Callable[[Any], bool] = lambda value: True
    hint: str = ""

    def parse(self, raw: str) -> Any:
        """转换并校验，失败时抛 ValueError"""
        value = self.kind(raw)
        if not self.check(value):
            raise ValueError(self.hint or f"取值无效: {raw}")
        return value


def _positive(value) -> bool:
    return value > 0


OPTIONS: Dict[Tuple[str, str], Option] = {
    ('integrator', 'rtol'): Option(float, '1e-9', _positive, "必须为正"),
    ('integrator', 'atol'): Option(float, '1e-12', _positive, "必须为正"),
    ('integrator', 'h_init'): Option(float, '1e-3', _positive, "必须为正"),
    ('integrator', 'h_max'): Option(float, '0.5', _positive, "必须为正"),
    ('integrator', 'max_steps'): Option(int, '200000', _positive, "必须为正整数"),
    ('criterion', 'constancy_tol'): Option(float, '1e-6', _positive, "必须为正"),
    ('criterion', 'grid_points'): Option(int, '200', lambda n: n >= 2, "至少为 2"),
    ('paths', 'log_path'): Option(str, ''),
    ('app', 'log_level'): Option(str, 'INFO', lambda s: isinstance(logging.getLevelName(s.upper()), int),
                                 "不是日志级别名"),
    ('app', 'num_threads'): Option(int, '0', lambda n: n >= 0, "不能为负"),
}

SECTIONS = tuple(dict.fromkeys(section for section, _ in OPTIONS))
INTEGRATOR_KEYS = tuple(key for section, key in OPTIONS if section == 'integrator')
OPTION_NAMES = tuple(f"{section}.{key}" for section, key in OPTIONS)


class UserConfigManager:
    """用户配置管理器"""

    def __init__(self, config_dir: Optional[Path] = None):
        self._config_dir = Path(config_dir) if config_dir else self._default_dir()
        self._config_file = self._config_dir / CONFIG_NAME
        self._config = configparser.ConfigParser()
        self._batch_depth = 0
        self._dirty = False
        self._config_dir.mkdir(parents=True, exist_ok=True)
        self._load()

    @staticmethod
    def _default_dir() -> Path:
        override = os.environ.get(CONFIG_DIR_ENV)
        return Path(override).expanduser() if override else Path.home() / ".lie-systems"

    def _default_log_path(self) -> str:
        return str((self._config_dir / "logs").resolve())

    # ------------------------------------------------------------ 读写

    def _load(self):
        if not self._config_file.exists():
            self._write_defaults()
            return
        try:
            if self._config_file.stat().st_size > MAX_CONFIG_BYTES:
                raise ValueError("配置文件过大")
            self._config.read(self._config_file, encoding='utf-8')
            self._validate()
        except (configparser.Error, UnicodeDecodeError, ValueError) as e:
            logger.warning(f"配置文件无效，恢复默认配置: {e}")
            self._backup()
            self._write_defaults()
            return
        logger.debug(f"已加载配置: {self._config_file}")

    def _validate(self):
        for section in SECTIONS:
            if not self._config.has_section(section):
                raise ValueError(f"缺少配置节 [{section}]")
        for (section, key), option in OPTIONS.items():
            if self._config.has_option(section, key):
                raw = self._config.get(section, key)
                try:
                    option.parse(raw)
                except ValueError as e:
                    raise ValueError(f"{section}.{key} = {raw!r}: {e}") from e
        log_path = self._config.get('paths', 'log_path', fallback='')
        if log_path and not os.path.isabs(log_path):
            logger.warning(f"日志路径不是绝对路径: {log_path}")

    def _backup(self):
        if not self._config_file.exists():
            return
        backup = self._config_file.with_suffix(f".corrupted_{datetime.now():%Y%m%d_%H%M%S}.bak")
        try:
            shutil.copy2(self._config_file, backup)
            logger.info(f"原配置已备份到: {backup}")
        except OSError as e:
            logger.error(f"备份配置文件失败: {e}")

    def _write_defaults(self):
        self._config.clear()
        for (section, key), option in OPTIONS.items():
            if not self._config.has_section(section):
                self._config.add_section(section)
            self._config.set(section, key, option.default)
        self._config.set('paths', 'log_path', self._default_log_path())
        self._save()
        logger.info(f"已写入默认配置: {self._config_file}")

    def _save(self):
        if self._batch_depth:
            self._dirty = True
        else:
            self._write_config_to_disk()

    def _write_config_to_disk(self):
        """写临时文件后原子替换"""
        temp = self._config_file.with_suffix('.tmp')
        try:
            with open(temp, 'w', encoding='utf-8') as f:
                self._config.write(f)
            temp.replace(self._config_file)
        except OSError as e:
            temp.unlink(missing_ok=True)
            raise ConfigError(f"无法保存配置文件 {self._config_file}: {e}") from e
        self._dirty = False

    @contextmanager
    def batch_update(self) -> Iterator['UserConfigManager']:
        """上下文内的修改在退出时一次写盘"""
        self._batch_depth += 1
        try:
            yield self
        finally:
            self._batch_depth -= 1
            if not self._batch_depth and self._dirty:
                self._write_config_to_disk()

    def _get(self, section: str, key: str) -> Any:
        option = OPTIONS[(section, key)]
        raw = self._config.get(section, key, fallback=option.default)
        try:
            return option.parse(raw)
        except ValueError:
            return option.parse(option.default)

    def _set(self, section: str, key: str, value: Any):
        option = OPTIONS.get((section, key))
        if option is None:
            raise ConfigError(f"未知配置项: {section}.{key}")
        try:
            option.parse(str(value))
        except ValueError as e:
            raise ConfigError(f"{section}.{key} = {value!r}: {e}") from e
        self._config.set(section, key, str(value))
        self._save()

    # ------------------------------------------------------------ 访问器

    def get_config_file_path(self) -> str:
        return str(self._config_file)

    def get_config_dir_path(self) -> str:
        return str(self._config_dir)

    def config_exists(self) -> bool:
        return self._config_file.exists()

    def get_integrator_settings(self) -> Dict[str, Any]:
        return {key: self._get('integrator', key) for key in INTEGRATOR_KEYS}

    def set_integrator_setting(self, key: str, value: float):
        if key not in INTEGRATOR_KEYS:
            raise ConfigError(f"未知的积分器参数: {key}（可用: {', '.join(INTEGRATOR_KEYS)}）")
        self._set('integrator', key, value)

    def get_integrator_config(self):
        """按配置文件构造 IntegratorConfig"""
        from core.numerics.config import IntegratorConfig
        return IntegratorConfig(**self.get_integrator_settings())

    def get_constancy_tol(self) -> float:
        return self._get('criterion', 'constancy_tol')

    def get_grid_points(self) -> int:
        return self._get('criterion', 'grid_points')

    def get_log_path(self) -> str:
        return os.path.abspath(self._get('paths', 'log_path') or self._default_log_path())

    def set_log_path(self, path: str):
        self._set('paths', 'log_path', os.path.abspath(path))

    def get_log_level(self) -> str:
        return self._get('app', 'log_level').upper()

    def get_num_threads(self) -> int:
        """参数扫描的线程数

        LIE_NUM_THREADS 优先于配置文件；0 表示 CPU 核数。

        Raises:
            ConfigError: 环境变量不是非负整数
        """
        raw = os.environ.get(NUM_THREADS_ENV)
        if raw:
            try:
                value = OPTIONS[('app', 'num_threads')].parse(raw)
            except ValueError as e:
                raise ConfigError(f"{NUM_THREADS_ENV}={raw!r} 无效: {e}") from e
        else:
            value = self._get('app', 'num_threads')
        return value or os.cpu_count() or 1

    def set_option(self, name: str, raw: str):
        """按 section.key 写入一项，例如 integrator.rtol

        Raises:
            ConfigError: 未知配置项或取值无效
        """
        section, _, key = name.partition('.')
        if (section, key) not in OPTIONS:
            raise ConfigError(f"未知配置项: {name}（可用: {', '.join(OPTION_NAMES)}）")
        if section == 'integrator':
            self.set_integrator_setting(key, raw)
        elif name == 'paths.log_path':
            self.set_log_path(raw)
        else:
            self._set(section, key, raw)

    def get_all_settings(self) -> Dict[str, Dict[str, str]]:
        return {name: dict(self._config.items(name)) for name in self._config.sections()}

    def reset_to_defaults(self):
        self._write_defaults()
