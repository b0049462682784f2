"""
打包 lie 为单文件控制台程序

    python build.py

依赖按 requirements.txt 校验版本，缺失或不一致时安装；LIE_PIP_INDEX 可指定镜像。
产物复制到 release/。
"""
# 标准库导入
import os
import platform
import shutil
import subprocess
import sys
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

ROOT = Path(__file__).resolve().parent
EXE_NAME = 'lie'
PIP_INDEX_ENV = 'LIE_PIP_INDEX'
BUILD_TOOLS = ('pyinstaller',)
HIDDEN_IMPORTS = ('numpy', 'pandas', 'yaml', 'dotenv', 'colorama', 'logging.handlers')


def clean() -> None:
    """删除上次构建的残留"""
    print("\n🧹 清理构建目录")
    for name in ('dist', 'build'):
        shutil.rmtree(ROOT / name, ignore_errors=True)
    for path in ROOT.glob('*.spec'):
        path.unlink()
    for cache in ROOT.rglob('__pycache__'):
        if 'examples' not in cache.parts:
            shutil.rmtree(cache, ignore_errors=True)


def requirements(path: Path = ROOT / 'requirements.txt') -> Iterator[Tuple[str, Optional[str]]]:
    """逐行给出 (包名, 固定版本)；未固定版本时为 None"""
    for line in path.read_text(encoding='utf-8').splitlines():
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        name, _, version = line.partition('==')
        yield name.strip().lower(), version.strip() or None


def installed() -> Dict[str, str]:
    out = subprocess.check_output([sys.executable, '-m', 'pip', 'list', '--format=freeze'], text=True)
    pairs = (line.split('==', 1) for line in out.splitlines() if '==' in line)
    return {name.lower(): version for name, version in pairs}


def pip_install(spec: str) -> None:
    cmd = [sys.executable, '-m', 'pip', 'install', spec]
    index = os.environ.get(PIP_INDEX_ENV)
    if index:
        cmd[4:4] = ['-i', index]
    print(f"   安装 {spec}")
    subprocess.check_call(cmd)


def sync_dependencies() -> None:
    print("\n📦 检查依赖")
    present = installed()
    wanted = list(requirements()) + [(tool, None) for tool in BUILD_TOOLS]
    for name, version in wanted:
        current = present.get(name)
        if current is None or (version and current != version):
            pip_install(f"{name}=={version}" if version else name)
        else:
            print(f"   {name} {current}")


def pyinstaller_args() -> List[str]:
    sep = ';' if platform.system() == 'Windows' else ':'
    args = [
        'main.py', f'--name={EXE_NAME}', '--console', '--onefile', '--noconfirm', '--clean',
        # 预设目录随程序分发
        f'--add-data=cli/presets.yaml{sep}cli',
    ]
    return args + [f'--hidden-import={module}' for module in HIDDEN_IMPORTS]


def release() -> Path:
    exe = f"{EXE_NAME}.exe" if platform.system() == 'Windows' else EXE_NAME
    built = ROOT / 'dist' / exe
    if not built.exists():
        raise FileNotFoundError(f"没有找到 {built}，请检查 PyInstaller 输出")
    target = ROOT / 'release'
    target.mkdir(exist_ok=True)
    return Path(shutil.copy2(built, target))


def build() -> Path:
    clean()
    sync_dependencies()
    print("\n🔨 PyInstaller 构建")
    subprocess.check_call([sys.executable, '-m', 'PyInstaller', *pyinstaller_args()], cwd=ROOT)
    return release()


if __name__ == '__main__':
    try:
        print(f"\n✅ 构建完成: {build()}")
    except (subprocess.CalledProcessError, FileNotFoundError) as e:
        print(f"❌ 构建失败: {e}")
        sys.exit(1)
