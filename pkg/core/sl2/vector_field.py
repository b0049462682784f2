"""多项式（更一般地，表达式）向量场与李括号"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from core.errors import GroupError, VariableMismatchError
from core.exprfn import TimeExpr, as_expr, const, differentiate, equivalent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyVectorField:
    """Σ components[i]·∂/∂variables[i]"""

    components: Tuple[TimeExpr, ...]
    variables: Tuple[str, ...]
    name: str = ''

    def __post_init__(self):
        comps = tuple(as_expr(c) for c in self.components)
        object.__setattr__(self, 'components', comps)
        object.__setattr__(self, 'variables', tuple(self.variables))
        if len(comps) != len(self.variables):
            raise VariableMismatchError(f"分量数 {len(comps)} 与变量数 {len(self.variables)} 不一致")

    def _check(self, other: 'PolyVectorField') -> None:
        if self.variables != other.variables:
            raise VariableMismatchError(f"变量列表不一致: {self.variables} vs {other.variables}")

    def named(self, name: str) -> 'PolyVectorField':
        return PolyVectorField(self.components, self.variables, name)

    def __add__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        self._check(other)
        return PolyVectorField(tuple(a + b for a, b in zip(self.components, other.components)), self.variables)

    def __sub__(self, other: 'PolyVectorField') -> 'PolyVectorField':
        self._check(other)
        return PolyVectorField(tuple(a - b for a, b in zip(self.components, other.components)), self.variables)

    def __neg__(self) -> 'PolyVectorField':
        return PolyVectorField(tuple(-a for a in self.components), self.variables)

    def scale(self, factor) -> 'PolyVectorField':
        return PolyVectorField(tuple(factor * a for a in self.components), self.variables)

    def __rmul__(self, factor) -> 'PolyVectorField':
        return self.scale(factor)

    def derivative(self, w: 'PolyVectorField') -> 'PolyVectorField':
        """(self·∇)w"""
        self._check(w)
        comps = []
        for wi in w.components:
            total = const(0.0)
            for vj, xj in zip(self.components, self.variables):
                total = total + vj * differentiate(wi, xj)
            comps.append(total)
        return PolyVectorField(tuple(comps), self.variables)

    def equivalent(self, other: 'PolyVectorField') -> bool:
        """分量在规范形下逐一相同"""
        self._check(other)
        return all(equivalent(a, b) for a, b in zip(self.components, other.components))

    def evaluate(self, point: Mapping[str, float]) -> np.ndarray:
        return np.array([c.evaluate(point) for c in self.components])

    def __str__(self) -> str:
        terms = ', '.join(f"{c}·∂{v}" for c, v in zip(self.components, self.variables))
        return f"{self.name or 'V'}[{terms}]"


def bracket(v: PolyVectorField, w: PolyVectorField) -> PolyVectorField:
    """[V, W] = (V·∇)W − (W·∇)V"""
    v._check(w)
    return v.derivative(w) - w.derivative(v)


def linear_combination(coefficients: Sequence[float], fields: Sequence[PolyVectorField]) -> PolyVectorField:
    result = None
    for coef, f in zip(coefficients, fields):
        if coef == 0:
            continue
        term = f.scale(float(coef))
        result = term if result is None else result + term
    if result is None:
        return PolyVectorField(tuple(const(0.0) for _ in fields[0].variables), fields[0].variables)
    return result


def _sample_points(variables: Sequence[str], count: int, rng: np.random.Generator):
    # 取正值区域，避开 1/x³ 一类奇点
    return [dict(zip(variables, rng.uniform(0.5, 1.5, len(variables)))) for _ in range(count)]


def structure_constants(fields: Sequence[PolyVectorField], seed: int = 0,
                        max_denominator: int = 64) -> np.ndarray:
    """结构常数 c[α, β, γ]：[X_α, X_β] = Σ_γ c[α,β,γ] X_γ

    先在随机点上最小二乘拟合，再取有理近似并做符号验证。

    Raises:
        GroupError: 括号不落在所给向量场张成的空间中（不封闭）
    """
    n = len(fields)
    variables = fields[0].variables
    for f in fields[1:]:
        fields[0]._check(f)
    rng = np.random.default_rng(seed)
    points = _sample_points(variables, 4 * n + 8, rng)
    basis = np.array([[f.evaluate(p) for f in fields] for p in points])  # (点, 场, 分量)
    design = basis.transpose(0, 2, 1).reshape(-1, n)

    c = np.zeros((n, n, n))
    for a in range(n):
        for b in range(a + 1, n):
            br = bracket(fields[a], fields[b])
            target = np.array([br.evaluate(p) for p in points]).reshape(-1)
            coef, *_ = np.linalg.lstsq(design, target, rcond=None)
            rational = [Fraction(float(x)).limit_denominator(max_denominator) for x in coef]
            candidate = linear_combination([float(x) for x in rational], fields)
            if not br.equivalent(candidate):
                raise GroupError(f"[{fields[a].name}, {fields[b].name}] 不在张成空间内")
            c[a, b] = [float(x) for x in rational]
            c[b, a] = -c[a, b]
    logger.debug(f"结构常数拟合完成，{n} 个生成元")
    return c


def is_closed(fields: Sequence[PolyVectorField], seed: int = 0) -> bool:
    """向量场是否张成有限维李代数（对括号封闭）"""
    try:
        structure_constants(fields, seed)
        return True
    except GroupError:
        return False


def check_relation(left: PolyVectorField, right: PolyVectorField,
                   expected: Dict[str, float], fields: Mapping[str, PolyVectorField]) -> bool:
    """[left, right] 是否恒等于 Σ expected[name]·fields[name]"""
    names = list(expected)
    rhs = linear_combination([expected[k] for k in names], [fields[k] for k in names])
    return bracket(left, right).equivalent(rhs)


def as_rhs(field: PolyVectorField):
    """单个向量场转为 integrate_ode 可用的右端函数"""
    compiled = [c.compile() for c in field.components]
    names = field.variables

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        b = dict(zip(names, y))
        b['t'] = t
        return np.array([f(b) for f in compiled])
    return rhs
