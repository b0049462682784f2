"""
测试配置文件
"""
import sys
from pathlib import Path

import numpy as np
import pytest

# 添加项目根目录到Python路径
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from core.numerics import IntegratorConfig  # noqa: E402
from core.sl2 import Sl2Coeffs  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_config_home(tmp_path, monkeypatch):
    """每个测试使用独立的配置目录，不触碰真实的 ~/.lie-systems"""
    config_dir = tmp_path / "lie-config"
    monkeypatch.setenv("LIE_CONFIG_DIR", str(config_dir))
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("LIE_NUM_THREADS", raising=False)
    return config_dir


@pytest.fixture(autouse=True)
def reset_registries():
    """单例在测试之间重置"""
    from cli.presets import PresetRegistry
    PresetRegistry.reset_instance()
    yield
    PresetRegistry.reset_instance()


@pytest.fixture
def tight_config():
    """验证闭式解时使用的积分器参数"""
    return IntegratorConfig(rtol=1e-10, atol=1e-12)


@pytest.fixture
def default_config():
    return IntegratorConfig()


@pytest.fixture
def rng():
    """固定种子的随机数发生器"""
    return np.random.default_rng(20240517)


@pytest.fixture
def ck_params():
    """Caldirola–Kanai 参数 (m0, mu, omega0)"""
    return 1.0, 0.2, 1.0


@pytest.fixture
def ck_coeffs(ck_params):
    """Caldirola–Kanai 振子的 SL(2,ℝ) 系数 (e^{-μt}/m0, 0, m0ω0²e^{μt})"""
    m0, mu, omega0 = ck_params
    return Sl2Coeffs.of(f"exp(-{mu}*t)/{m0}", "0", f"{m0}*{omega0}^2*exp({mu}*t)")
