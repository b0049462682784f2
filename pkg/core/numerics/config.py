"""积分器配置"""

from dataclasses import dataclass, replace

from core.errors import ConfigError


@dataclass(frozen=True)
class IntegratorConfig:
    """自适应积分器参数

    Attributes:
        rtol: 相对容差
        atol: 绝对容差
        h_init: 初始步长
        h_max: 最大步长
        max_steps: 步数预算（含被拒绝的尝试步）
        blow_up: 任一分量绝对值超过该阈值即标记爆破并停止
    """

    rtol: float = 1e-9
    atol: float = 1e-12
    h_init: float = 1e-3
    h_max: float = 0.5
    max_steps: int = 200000
    blow_up: float = 1e8

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ConfigError(f"容差必须为正: rtol={self.rtol}, atol={self.atol}")
        if not (0 < self.h_init <= self.h_max):
            raise ConfigError(f"步长设置无效: h_init={self.h_init}, h_max={self.h_max}")
        if self.max_steps < 1:
            raise ConfigError(f"步数预算必须为正: {self.max_steps}")
        if self.blow_up <= 0:
            raise ConfigError(f"爆破阈值必须为正: {self.blow_up}")

    def with_overrides(self, **kwargs) -> 'IntegratorConfig':
        """返回覆盖部分字段后的新配置，忽略值为 None 的项"""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_CONFIG = IntegratorConfig()
