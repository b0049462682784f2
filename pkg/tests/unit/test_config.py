"""
配置管理单元测试
"""
import configparser
import os
from pathlib import Path

import pytest

from cli.commands import Settings
from core.config.user_config import UserConfigManager
from core.errors import ConfigError
from core.numerics import IntegratorConfig


@pytest.mark.unit
class TestUserConfigManager:
    """用户配置管理器测试类"""

    def test_creates_default_config(self, isolated_config_home):
        """首次运行在 LIE_CONFIG_DIR 下生成默认配置"""
        manager = UserConfigManager()
        assert Path(manager.get_config_file_path()) == isolated_config_home / "config.ini"
        assert manager.config_exists()

        parser = configparser.ConfigParser()
        parser.read(manager.get_config_file_path(), encoding='utf-8')
        for section in ('integrator', 'criterion', 'paths', 'app'):
            assert parser.has_section(section)

    def test_integrator_defaults(self):
        settings = UserConfigManager().get_integrator_settings()
        assert settings == {'rtol': 1e-9, 'atol': 1e-12, 'h_init': 1e-3, 'h_max': 0.5, 'max_steps': 200000}
        config = UserConfigManager().get_integrator_config()
        assert isinstance(config, IntegratorConfig)
        assert config.max_steps == 200000

    def test_setting_persists(self):
        UserConfigManager().set_integrator_setting('rtol', 1e-7)
        assert UserConfigManager().get_integrator_settings()['rtol'] == 1e-7

    def test_unknown_integrator_setting(self):
        with pytest.raises(ConfigError):
            UserConfigManager().set_integrator_setting('order', 5)

    @pytest.mark.parametrize("key, value", [('rtol', -1e-6), ('max_steps', 0), ('max_steps', 1.5)])
    def test_invalid_setting_rejected(self, key, value):
        """非法取值不写入配置"""
        manager = UserConfigManager()
        with pytest.raises(ConfigError):
            manager.set_integrator_setting(key, value)
        assert UserConfigManager().get_integrator_settings() == manager.get_integrator_settings()

    def test_invalid_log_level_rejected(self):
        with pytest.raises(ConfigError):
            UserConfigManager().set_option('app.log_level', 'loud')

    def test_criterion_defaults(self):
        manager = UserConfigManager()
        assert manager.get_constancy_tol() == 1e-6
        assert manager.get_grid_points() == 200

    def test_invalid_values_are_replaced(self, isolated_config_home):
        """积分器参数非正时备份原文件并恢复默认"""
        isolated_config_home.mkdir(parents=True)
        (isolated_config_home / "config.ini").write_text(
            "[integrator]\nrtol = -1\n[criterion]\n[paths]\n[app]\n", encoding='utf-8')
        manager = UserConfigManager()
        assert manager.get_integrator_settings()['rtol'] == 1e-9
        assert list(isolated_config_home.glob("config.corrupted_*.bak"))

    def test_unparsable_file(self, isolated_config_home):
        isolated_config_home.mkdir(parents=True)
        (isolated_config_home / "config.ini").write_text("这不是 ini 文件\n", encoding='utf-8')
        manager = UserConfigManager()
        assert manager.get_grid_points() == 200
        assert list(isolated_config_home.glob("config.corrupted_*.bak"))

    def test_log_path(self, isolated_config_home, tmp_path):
        manager = UserConfigManager()
        assert manager.get_log_path() == str((isolated_config_home / "logs").resolve())
        manager.set_log_path(str(tmp_path / "elsewhere"))
        assert UserConfigManager().get_log_path() == os.path.abspath(tmp_path / "elsewhere")

    def test_log_level(self):
        manager = UserConfigManager()
        assert manager.get_log_level() == 'INFO'
        manager.set_option('app.log_level', 'DEBUG')
        assert UserConfigManager().get_log_level() == 'DEBUG'

    def test_set_option_by_name(self, tmp_path):
        """section.key 形式写入，按类型校验"""
        manager = UserConfigManager()
        manager.set_option('criterion.grid_points', '50')
        manager.set_option('integrator.max_steps', '1000')
        manager.set_option('paths.log_path', str(tmp_path / "logs"))
        reloaded = UserConfigManager()
        assert reloaded.get_grid_points() == 50
        assert reloaded.get_integrator_settings()['max_steps'] == 1000
        assert reloaded.get_log_path() == os.path.abspath(tmp_path / "logs")

    @pytest.mark.parametrize("name, raw", [
        ('integrator.order', '5'), ('rtol', '1e-6'), ('criterion.grid_points', '1'),
        ('criterion.constancy_tol', 'tiny'),
    ])
    def test_set_option_rejected(self, name, raw):
        manager = UserConfigManager()
        with pytest.raises(ConfigError):
            manager.set_option(name, raw)
        assert UserConfigManager().get_all_settings() == manager.get_all_settings()

    def test_batch_update_writes_once(self, mocker):
        manager = UserConfigManager()
        spy = mocker.spy(manager, '_write_config_to_disk')
        with manager.batch_update():
            manager.set_integrator_setting('rtol', 1e-8)
            manager.set_integrator_setting('atol', 1e-10)
            assert spy.call_count == 0
        assert spy.call_count == 1
        assert UserConfigManager().get_integrator_settings()['atol'] == 1e-10

    def test_reset_to_defaults(self):
        manager = UserConfigManager()
        manager.set_option('app.num_threads', '3')
        manager.reset_to_defaults()
        assert manager.get_all_settings()['app']['num_threads'] == '0'


@pytest.mark.unit
class TestNumThreads:
    """LIE_NUM_THREADS 优先于配置文件"""

    def test_zero_means_cpu_count(self, mocker):
        mocker.patch('core.config.user_config.os.cpu_count', return_value=6)
        assert UserConfigManager().get_num_threads() == 6

    def test_config_value(self):
        manager = UserConfigManager()
        manager.set_option('app.num_threads', '3')
        assert manager.get_num_threads() == 3

    def test_environment_override(self, monkeypatch):
        manager = UserConfigManager()
        manager.set_option('app.num_threads', '3')
        monkeypatch.setenv("LIE_NUM_THREADS", "2")
        assert manager.get_num_threads() == 2

    @pytest.mark.parametrize("raw", ["many", "-1"])
    def test_invalid_environment(self, monkeypatch, raw):
        monkeypatch.setenv("LIE_NUM_THREADS", raw)
        with pytest.raises(ConfigError):
            UserConfigManager().get_num_threads()


@pytest.mark.unit
class TestSettings:
    """命令行运行参数来自配置文件"""

    def test_load(self, monkeypatch):
        manager = UserConfigManager()
        manager.set_integrator_setting('max_steps', 5000)
        monkeypatch.setenv("LIE_NUM_THREADS", "4")
        settings = Settings.load(manager)
        assert settings.integrator.max_steps == 5000
        assert settings.constancy_tol == 1e-6
        assert settings.grid_points == 200
        assert settings.num_threads == 4
