"""预设目录：从 presets.yaml 读取，进程内只加载一次"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

import yaml

from core.base.singleton import SingletonBase
from core.errors import ConfigError, ExprError
from core.exprfn import TimeExpr, parse, substitute

logger = logging.getLogger(__name__)

PRESETS_FILE = Path(__file__).with_name('presets.yaml')

KINDS = ('oscillator', 'pinney', 'ermakov', 'ermakov_generalized', 'pinney_triple', 'oscillator_pair')


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str
    description: str
    variables: Tuple[str, ...]
    parameters: Dict[str, object]
    expressions: Dict[str, str]
    initial: Dict[str, float]
    invariants: Tuple[str, ...] = ()

    @classmethod
    def from_mapping(cls, name: str, data: Mapping) -> 'Preset':
        try:
            kind = data['kind']
            variables = tuple(data['variables'])
        except (KeyError, TypeError) as e:
            raise ConfigError(f"预设 {name} 缺少字段: {e}") from e
        if kind not in KINDS:
            raise ConfigError(f"预设 {name} 的类型未知: {kind}")
        return cls(
            name=name,
            kind=kind,
            description=str(data.get('description', '')),
            variables=variables,
            parameters=dict(data.get('parameters') or {}),
            expressions={k: str(v) for k, v in (data.get('expressions') or {}).items()},
            initial={k: float(v) for k, v in (data.get('initial') or {}).items()},
            invariants=tuple(data.get('invariants') or ()),
        )

    def bind(self, overrides: Optional[Mapping[str, str]] = None) -> 'BoundPreset':
        """代入参数，返回展开后的表达式

        Raises:
            ConfigError: 覆盖了不存在的参数，或参数/模板无法解析
        """
        overrides = dict(overrides or {})
        unknown = sorted(set(overrides) - set(self.parameters))
        if unknown:
            raise ConfigError(f"预设 {self.name} 没有参数: {', '.join(unknown)}"
                              f"（可用: {', '.join(self.parameters)}）")
        values: Dict[str, TimeExpr] = {}
        for pname, default in self.parameters.items():
            raw = overrides.get(pname, default)
            try:
                values[pname] = parse(str(raw))
            except ExprError as e:
                raise ConfigError(f"参数 {pname}={raw!r} 无法解析: {e}") from e

        expressions = {}
        for key, template in self.expressions.items():
            try:
                parsed = parse(template, extra_identifiers=self.parameters)
            except ExprError as e:
                raise ConfigError(f"预设 {self.name} 的模板 {key} 无效: {e}") from e
            expressions[key] = substitute(parsed, values)
        return BoundPreset(self, values, expressions)


@dataclass(frozen=True)
class BoundPreset:
    preset: Preset
    parameters: Dict[str, TimeExpr]
    expressions: Dict[str, TimeExpr] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.preset.kind

    def expr(self, key: str) -> TimeExpr:
        try:
            return self.expressions[key]
        except KeyError:
            raise ConfigError(f"预设 {self.preset.name} 没有表达式 {key}") from None

    def number(self, name: str) -> float:
        """取值为常数的参数"""
        value = self.parameters.get(name)
        if value is None:
            raise ConfigError(f"预设 {self.preset.name} 没有参数 {name}")
        if value.free_variables():
            raise ConfigError(f"参数 {name} 必须是常数: {value}")
        return value.evaluate({})


class PresetRegistry(SingletonBase):
    """预设注册表（单例）"""

    def _initialize(self, path: Optional[Path] = None):
        self.path = Path(path) if path else PRESETS_FILE
        self._presets: Dict[str, Preset] = {}
        self._load()

    def _load(self):
        try:
            with open(self.path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"无法读取预设文件 {self.path}: {e}") from e
        for name, entry in data.items():
            self._presets[name] = Preset.from_mapping(name, entry)
        logger.debug(f"已加载 {len(self._presets)} 个预设: {self.path}")

    def names(self) -> List[str]:
        return list(self._presets)

    def get(self, name: str) -> Preset:
        try:
            return self._presets[name]
        except KeyError:
            raise ConfigError(f"未知预设: {name}（可用: {', '.join(self._presets)}）") from None

    def all(self) -> List[Preset]:
        return list(self._presets.values())
