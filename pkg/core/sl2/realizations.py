"""sl(2,ℝ) 的向量场实现

每个构造函数返回 {名称: 向量场}；STATED_RELATIONS 列出各族的对易关系，
可用 verify_relations 做符号核验。
"""

from typing import Dict, List, Tuple

from core.exprfn import TimeExpr, as_expr, const, substitute, var
from core.exprfn.nodes import Div, Var
from core.sl2.vector_field import PolyVectorField, check_relation

Fields = Dict[str, PolyVectorField]

X, P, V = var('x'), var('p'), var('v')
VX, Y, VY, Z, VZ = var('vx'), var('y'), var('vy'), var('z'), var('vz')
ZERO = const(0.0)


def _field(name: str, variables, *components) -> PolyVectorField:
    return PolyVectorField(tuple(as_expr(c) for c in components), tuple(variables), name)


def riccati_fields() -> Fields:
    """Y₀ = ∂x, Y₁ = x∂x, Y₂ = x²∂x"""
    vs = ('x',)
    return {
        'Y0': _field('Y0', vs, 1.0),
        'Y1': _field('Y1', vs, X),
        'Y2': _field('Y2', vs, X ** 2),
    }


def tdho_fields() -> Fields:
    """X₀ = p∂x, X₁ = ½(x∂x − p∂p), X₂ = −x∂p"""
    vs = ('x', 'p')
    return {
        'X0': _field('X0', vs, P, ZERO),
        'X1': _field('X1', vs, 0.5 * X, -0.5 * P),
        'X2': _field('X2', vs, ZERO, -X),
    }


def sode_fields(dimension: int = 1) -> Fields:
    """二阶方程组 ẍᵢ = −ω²(t)xᵢ 的向量场：X₁ = Σxᵢ∂vᵢ, X₂ = Σvᵢ∂xᵢ, X₃ = ½Σ(xᵢ∂xᵢ − vᵢ∂vᵢ)

    一维变量为 (x, v)，二维各向同性情形为 (x, vx, y, vy)。
    """
    if dimension == 1:
        pairs = [(X, V, 'x', 'v')]
    elif dimension == 2:
        pairs = [(X, VX, 'x', 'vx'), (Y, VY, 'y', 'vy')]
    else:
        raise ValueError(f"仅支持一维或二维: {dimension}")
    vs = tuple(name for _, _, xn, vn in pairs for name in (xn, vn))
    x1, x2, x3 = [], [], []
    for pos, vel, _, _ in pairs:
        x1 += [ZERO, pos]
        x2 += [vel, ZERO]
        x3 += [0.5 * pos, -0.5 * vel]
    return {
        'X1': _field('X1', vs, *x1),
        'X2': _field('X2', vs, *x2),
        'X3': _field('X3', vs, *x3),
    }


def pinney_fields(k: float = 1.0) -> Fields:
    """L₁ = x∂v, L₂ = v∂x + k/x³∂v, L₃ = ½(x∂x − v∂v)"""
    vs = ('x', 'v')
    return {
        'L1': _field('L1', vs, ZERO, X),
        'L2': _field('L2', vs, V, k / X ** 3),
        'L3': _field('L3', vs, 0.5 * X, -0.5 * V),
    }


def ermakov_fields() -> Fields:
    """谐振子 x 与 Pinney 变量 y 组成的 Ermakov 系统，变量 (x, vx, y, vy)"""
    vs = ('x', 'vx', 'y', 'vy')
    return {
        'X1': _field('X1', vs, ZERO, X, ZERO, Y),
        'X2': _field('X2', vs, VX, ZERO, VY, 1 / Y ** 3),
        'X3': _field('X3', vs, 0.5 * X, -0.5 * VX, 0.5 * Y, -0.5 * VY),
    }


def _of_ratio(h: TimeExpr) -> TimeExpr:
    """h(u) 在 u = y/x 处"""
    return substitute(h, {'u': TimeExpr(Div(Var('y'), Var('x')))})


def generalized_ermakov_fields(f: TimeExpr, g: TimeExpr) -> Fields:
    """N₁ = x∂vx + y∂vy, N₂ = vx∂x + f(y/x)/x³∂vx + vy∂y + g(y/x)/y³∂vy, N₃ 为伸缩场"""
    vs = ('x', 'vx', 'y', 'vy')
    return {
        'N1': _field('N1', vs, ZERO, X, ZERO, Y),
        'N2': _field('N2', vs, VX, _of_ratio(f) / X ** 3, VY, _of_ratio(g) / Y ** 3),
        'N3': _field('N3', vs, 0.5 * X, -0.5 * VX, 0.5 * Y, -0.5 * VY),
    }


def pinney_triple_fields(k: float = 1.0) -> Fields:
    """x 为 Pinney 变量、y 与 z 为谐振子，变量 (x, vx, y, vy, z, vz)"""
    vs = ('x', 'vx', 'y', 'vy', 'z', 'vz')
    return {
        'N1': _field('N1', vs, ZERO, X, ZERO, Y, ZERO, Z),
        'N2': _field('N2', vs, VX, k / X ** 3, VY, ZERO, VZ, ZERO),
        'N3': _field('N3', vs, 0.5 * X, -0.5 * VX, 0.5 * Y, -0.5 * VY, 0.5 * Z, -0.5 * VZ),
    }


# (左, 右, 期望的线性组合)
Relation = Tuple[str, str, Dict[str, float]]

STATED_RELATIONS: Dict[str, List[Relation]] = {
    'riccati': [
        ('Y0', 'Y1', {'Y0': 1.0}),
        ('Y2', 'Y1', {'Y2': -1.0}),
        ('Y2', 'Y0', {'Y1': -2.0}),
    ],
    'tdho': [
        ('X0', 'X1', {'X0': 1.0}),
        ('X2', 'X1', {'X2': -1.0}),
        ('X2', 'X0', {'X1': -2.0}),
    ],
    'pinney': [
        ('L1', 'L2', {'L3': 2.0}),
        ('L3', 'L1', {'L1': 1.0}),
        ('L3', 'L2', {'L2': -1.0}),
    ],
    'generalized_ermakov': [
        ('N1', 'N2', {'N3': 2.0}),
        ('N3', 'N1', {'N1': 1.0}),
        ('N3', 'N2', {'N2': -1.0}),
    ],
}
STATED_RELATIONS['sode'] = [
    ('X1', 'X2', {'X3': 2.0}),
    ('X3', 'X1', {'X1': 1.0}),
    ('X3', 'X2', {'X2': -1.0}),
]
STATED_RELATIONS['ermakov'] = STATED_RELATIONS['sode']
STATED_RELATIONS['pinney_triple'] = STATED_RELATIONS['generalized_ermakov']


def verify_relations(family: str, fields: Fields) -> List[Tuple[str, bool]]:
    """逐条核验对易关系，返回 [("[A,B]", 是否成立), ...]"""
    results = []
    for left, right, expected in STATED_RELATIONS[family]:
        ok = check_relation(fields[left], fields[right], expected, fields)
        results.append((f"[{left},{right}]", ok))
    return results
