"""命令行界面"""

from .app import build_parser, run
from .commands import RunConfig, Settings, cmd_check, cmd_integrate, cmd_presets, cmd_superpose
from .presets import BoundPreset, Preset, PresetRegistry

__all__ = [
    'run', 'build_parser', 'RunConfig', 'Settings', 'cmd_integrate', 'cmd_check',
    'cmd_superpose', 'cmd_presets', 'Preset', 'BoundPreset', 'PresetRegistry',
]
