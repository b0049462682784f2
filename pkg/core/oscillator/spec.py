"""含时谐振子 H = ½p²/m(t) + ½m(t)ω²(t)x² 及其 SL(2,ℝ) 系数"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from core.errors import ExprError, OscillatorError
from core.exprfn import TimeExpr, as_expr, const, exp, var
from core.sl2 import PolyVectorField, Sl2Coeffs, linear_combination
from core.sl2.coeffs import Coefficient, _coerce
from core.sl2.realizations import tdho_fields

T = var('t')


class OscillatorKind(str, Enum):
    GENERIC = 'generic'
    CALDIROLA_KANAI = 'caldirola_kanai'
    TD_FREQUENCY = 'td_frequency'


@dataclass(frozen=True)
class OscillatorSpec:
    """质量 m(t) 与频率平方 ω²(t)；kind 与 params 记录预设来源"""

    m: TimeExpr
    omega2: TimeExpr
    kind: OscillatorKind = OscillatorKind.GENERIC
    params: Tuple[Tuple[str, float], ...] = field(default_factory=tuple)
    F: Optional[TimeExpr] = None

    @classmethod
    def generic(cls, m: Coefficient, omega2: Coefficient) -> 'OscillatorSpec':
        return cls(_coerce(m), _coerce(omega2))

    @classmethod
    def caldirola_kanai(cls, m0: float, mu: float, omega0: float) -> 'OscillatorSpec':
        """m(t) = m₀e^{μt}，ω ≡ ω₀"""
        if m0 <= 0:
            raise OscillatorError(f"质量参数必须为正: m0={m0}")
        return cls(m0 * exp(mu * T), const(omega0 ** 2), OscillatorKind.CALDIROLA_KANAI,
                   (('m0', float(m0)), ('mu', float(mu)), ('omega0', float(omega0))))

    @classmethod
    def td_frequency(cls, F: Coefficient, omega0: float, **extra: float) -> 'OscillatorSpec':
        """m ≡ 1，ω²(t) = F(t)ω₀²"""
        f = _coerce(F)
        params = (('omega0', float(omega0)),) + tuple((k, float(v)) for k, v in extra.items())
        return cls(const(1.0), (omega0 ** 2) * f, OscillatorKind.TD_FREQUENCY, params, f)

    @property
    def parameters(self) -> Dict[str, float]:
        return dict(self.params)

    def param(self, name: str) -> float:
        try:
            return self.parameters[name]
        except KeyError:
            raise OscillatorError(f"{self.kind.value} 振子没有参数 {name}") from None

    def check_mass(self, grid: Sequence[float]) -> None:
        """m(t) 在网格上必须为正且有限"""
        for t in grid:
            try:
                value = self.m.at(float(t))
            except ExprError as e:
                raise OscillatorError(f"质量在 t={float(t):.6g} 处无法求值: {e}") from e
            if not (math.isfinite(value) and value > 0.0):
                raise OscillatorError(f"质量在 t={float(t):.6g} 处非正: {value}")


@dataclass(frozen=True)
class PhaseState:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise OscillatorError(f"相空间状态非有限: ({self.x}, {self.p})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.p])

    @classmethod
    def from_array(cls, values) -> 'PhaseState':
        x, p = (float(v) for v in values)
        return cls(x, p)


def to_sl2_coeffs(s: OscillatorSpec) -> Sl2Coeffs:
    """b₀ = 1/m, b₁ = 0, b₂ = mω²"""
    if s.kind == OscillatorKind.CALDIROLA_KANAI:
        m0, mu, w0 = s.param('m0'), s.param('mu'), s.param('omega0')
        return Sl2Coeffs(exp(-mu * T) / m0, const(0.0), (m0 * w0 ** 2) * exp(mu * T))
    if s.kind == OscillatorKind.TD_FREQUENCY:
        return Sl2Coeffs(const(1.0), const(0.0), as_expr(s.omega2))
    return Sl2Coeffs(1 / s.m, const(0.0), s.m * s.omega2)


def hamilton_rhs(s: OscillatorSpec):
    """Hamilton 方程 ẋ = p/m，ṗ = −mω²x，状态 (x, p)"""
    c = to_sl2_coeffs(s)
    b0, b2 = c.b0.compile(), c.b2.compile()

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        b = {'t': t}
        return np.array([b0(b) * y[1], -b2(b) * y[0]])
    return rhs


def hamilton_field(s: OscillatorSpec) -> PolyVectorField:
    """X = b₀(t)X₀ + b₂(t)X₂，tdho 向量场的含时组合"""
    c = to_sl2_coeffs(s)
    fields = tdho_fields()
    x0, x2 = fields['X0'].scale(c.b0), fields['X2'].scale(c.b2)
    return linear_combination([1.0, 1.0], [x0, x2]).named('X')
