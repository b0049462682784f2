"""配置管理模块"""

from .user_config import UserConfigManager

__all__ = ['UserConfigManager']
