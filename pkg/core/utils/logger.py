"""
日志工具

stdout 留给 CSV 与报告，所有日志走 stderr 和按日期命名的日志文件。
"""
import logging
import sys
import tempfile
import time
from datetime import datetime, timedelta
from functools import wraps
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Callable, Optional, Tuple

from core.errors import exit_code_for

LOG_PREFIX = "lie_systems"
LOG_FORMAT = '%(asctime)s [%(levelname)-8s] %(name)s:%(lineno)d - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
MAX_BYTES = 10 * 1024 * 1024
BACKUP_COUNT = 10
KEEP_DAYS = 7

# 标记本模块安装的 handler，重复初始化时只替换这些
_OWNED = '_lie_owned'


def fallback_log_dir() -> Path:
    return Path(tempfile.gettempdir()) / f'{LOG_PREFIX}_logs'


def get_log_level(level_name: str) -> int:
    """级别名转为 logging 常量，无法识别时为 INFO"""
    level = logging.getLevelName(str(level_name).upper())
    return level if isinstance(level, int) else logging.INFO


def log_operation(operation_name: str) -> Callable:
    """记录操作耗时；失败时记录错误后原样抛出"""
    def decorator(func: Callable) -> Callable:
        log = logging.getLogger(func.__module__)

        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            log.debug(f"{operation_name}开始")
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                log.error(f"{operation_name}失败（{time.perf_counter() - start:.3f}秒）: {e}")
                raise
            log.info(f"{operation_name}完成，耗时 {time.perf_counter() - start:.3f}秒")
            return result
        return wrapper
    return decorator


def cleanup_old_logs(log_dir: Path, days: int = KEEP_DAYS) -> int:
    """删除超过保留天数的日志，返回删除的文件数"""
    cutoff = datetime.now() - timedelta(days=days)
    removed = 0
    for path in Path(log_dir).glob(f"{LOG_PREFIX}_*.log*"):
        try:
            if datetime.fromtimestamp(path.stat().st_mtime) < cutoff:
                path.unlink()
                removed += 1
        except OSError as e:
            print(f"删除旧日志失败 {path}: {e}", file=sys.stderr)
    return removed


def _configured() -> Tuple[Optional[str], int]:
    """从用户配置读取日志目录与级别；读不到时用默认值"""
    try:
        from core.config.user_config import UserConfigManager
        manager = UserConfigManager()
        return manager.get_log_path(), get_log_level(manager.get_log_level())
    except Exception as e:
        print(f"读取日志配置失败，使用默认值: {e}", file=sys.stderr)
        return None, logging.INFO


def _prepare_dir(configured: Optional[str]) -> Path:
    for candidate in (configured, fallback_log_dir()):
        if not candidate:
            continue
        path = Path(candidate)
        try:
            path.mkdir(parents=True, exist_ok=True)
            return path
        except OSError as e:
            print(f"无法创建日志目录 {path}: {e}", file=sys.stderr)
    raise OSError("没有可写的日志目录")


def _own(handler: logging.Handler, level: int, formatter: logging.Formatter) -> logging.Handler:
    handler.setFormatter(formatter)
    handler.setLevel(level)
    setattr(handler, _OWNED, True)
    return handler


def setup_logging(verbose: bool = False) -> Optional[Path]:
    """配置根日志器，返回日志文件路径（文件不可用时为 None）

    控制台默认只输出 WARNING 及以上，verbose 时跟随配置的级别。
    """
    configured_dir, level = _configured()
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    root = logging.getLogger()
    root.setLevel(level)
    for handler in [h for h in root.handlers if getattr(h, _OWNED, False)]:
        root.removeHandler(handler)
        handler.close()

    console_level = level if verbose else max(level, logging.WARNING)
    root.addHandler(_own(logging.StreamHandler(sys.stderr), console_level, formatter))

    try:
        log_dir = _prepare_dir(configured_dir)
        cleanup_old_logs(log_dir)
        log_file = log_dir / f"{LOG_PREFIX}_{datetime.now():%Y%m%d}.log"
        root.addHandler(_own(
            RotatingFileHandler(log_file, maxBytes=MAX_BYTES, backupCount=BACKUP_COUNT, encoding='utf-8'),
            level, formatter,
        ))
    except OSError as e:
        root.warning(f"日志文件不可用，仅输出到控制台: {e}")
        return None
    root.info(f"日志文件: {log_file}，级别: {logging.getLevelName(level)}")
    return log_file


def handle_error(logger: logging.Logger, context: str, error: Exception, operation: str) -> int:
    """记录错误并返回对应的退出码

    Args:
        logger: 调用方的日志器
        context: 上下文，如命令名或扫描取值
        error: 捕获的异常
        operation: 操作名称

    Returns:
        int: 退出码，见 core.errors.exit_code_for
    """
    logger.error(f"{context} - {operation}失败: {error}", exc_info=logger.isEnabledFor(logging.DEBUG))
    return exit_code_for(error)
