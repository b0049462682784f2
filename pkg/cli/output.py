"""输出：数据走 stdout 或文件，诊断走 stderr（终端下带颜色前缀）"""

import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

import colorama

from core.errors import ConfigError

logger = logging.getLogger(__name__)

_PREFIX = {
    'error': (colorama.Fore.RED, 'error'),
    'warning': (colorama.Fore.YELLOW, 'warning'),
    'info': (colorama.Fore.CYAN, 'info'),
}


def init_output() -> None:
    colorama.just_fix_windows_console()


def diagnostic(message: str, level: str = 'error', stream: Optional[TextIO] = None) -> None:
    stream = stream or sys.stderr
    color, label = _PREFIX.get(level, _PREFIX['info'])
    if getattr(stream, 'isatty', lambda: False)():
        prefix = f"{color}{label}:{colorama.Style.RESET_ALL}"
    else:
        prefix = f"{label}:"
    print(f"{prefix} {message}", file=stream)


def emit(text: str, out: Optional[str] = None, stream: Optional[TextIO] = None) -> None:
    """写出数据；out 为 None 时写 stdout"""
    if out:
        try:
            Path(out).write_text(text, encoding='utf-8')
        except OSError as e:
            raise ConfigError(f"无法写入输出文件 {out}: {e}") from e
        logger.info(f"输出已写入: {out}")
        return
    (stream or sys.stdout).write(text)
