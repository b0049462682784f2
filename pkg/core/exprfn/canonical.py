"""规范形：以不透明原子为变量、有理系数的 Laurent 多项式

用于判定两个表达式是否恒等（李括号表等）。原子包括变量、函数调用
（参数先规范化）、非整数次幂以及多项和的倒数。不是通用化简器。
"""

from fractions import Fraction
from typing import Dict, Tuple

from core.errors import ExprDomainError
from core.exprfn.nodes import (
    Add, Const, Div, Func, Mul, Neg, Node, Pow, Sub, TimeExpr, Var, _as_node,
)

Atom = Tuple
Monomial = Tuple[Tuple[Atom, int], ...]
Poly = Dict[Monomial, Fraction]


def _key(poly: Poly) -> Tuple:
    return tuple(sorted(poly.items(), key=repr))


def _monomial(factors: Dict[Atom, int]) -> Monomial:
    return tuple(sorted(((a, n) for a, n in factors.items() if n != 0), key=repr))


def _constant(value) -> Poly:
    c = Fraction(value)
    return {(): c} if c != 0 else {}


def _atom(atom: Atom) -> Poly:
    return {((atom, 1),): Fraction(1)}


def _add(a: Poly, b: Poly) -> Poly:
    result = dict(a)
    for mono, c in b.items():
        total = result.get(mono, Fraction(0)) + c
        if total == 0:
            result.pop(mono, None)
        else:
            result[mono] = total
    return result


def _scale(a: Poly, c: Fraction) -> Poly:
    if c == 0:
        return {}
    return {mono: v * c for mono, v in a.items()}


def _mul(a: Poly, b: Poly) -> Poly:
    result: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            factors = dict(m1)
            for atom, n in m2:
                factors[atom] = factors.get(atom, 0) + n
            result = _add(result, {_monomial(factors): c1 * c2})
    return result


def _inverse(a: Poly) -> Poly:
    if not a:
        raise ExprDomainError("规范形中出现除以零")
    if len(a) == 1:
        (mono, c), = a.items()
        return {tuple((atom, -n) for atom, n in mono): 1 / c}
    # 以首项系数归一后作为原子
    lead = _key(a)[0][1]
    normalized = _scale(a, 1 / lead)
    return _scale(_atom(('inv', _key(normalized))), 1 / lead)


# 多项和或非 ±1 系数的展开上限，超过时整体作为原子
MAX_EXPANDED_POWER = 64


def _int_power(a: Poly, n: int) -> Poly:
    if n < 0:
        return _int_power(_inverse(a), -n)
    if not a and n:
        return {}
    if len(a) == 1:
        (mono, c), = a.items()
        if abs(c) == 1 or n <= MAX_EXPANDED_POWER:
            return {_monomial({atom: k * n for atom, k in mono}): c ** n}
    if n > MAX_EXPANDED_POWER:
        return _atom(('pow', _key(a), _key(_constant(n))))
    result = _constant(1)
    while n:
        if n & 1:
            result = _mul(result, a)
        n >>= 1
        if n:
            a = _mul(a, a)
    return result


def _canon(node: Node) -> Poly:
    if isinstance(node, Const):
        return _constant(node.value)
    if isinstance(node, Var):
        return _atom(('var', node.name))
    if isinstance(node, Add):
        return _add(_canon(node.left), _canon(node.right))
    if isinstance(node, Sub):
        return _add(_canon(node.left), _scale(_canon(node.right), Fraction(-1)))
    if isinstance(node, Mul):
        return _mul(_canon(node.left), _canon(node.right))
    if isinstance(node, Div):
        return _mul(_canon(node.left), _inverse(_canon(node.right)))
    if isinstance(node, Neg):
        return _scale(_canon(node.arg), Fraction(-1))
    if isinstance(node, Pow):
        base = _canon(node.base)
        exponent = _canon(node.exponent)
        if not exponent:
            return _constant(1)
        if len(exponent) == 1 and () in exponent and exponent[()].denominator == 1:
            return _int_power(base, int(exponent[()]))
        return _atom(('pow', _key(base), _key(exponent)))
    if isinstance(node, Func):
        return _atom(('func', node.name, _key(_canon(node.arg))))
    raise TypeError(f"无法规范化的节点: {node!r}")


def canonical(e) -> Tuple:
    """返回可哈希的规范形"""
    return _key(_canon(_as_node(e)))


def equivalent(a, b) -> bool:
    """两个表达式在规范形下是否相同"""
    diff = Sub(_as_node(a), _as_node(b))
    return not _canon(diff)


def is_zero(e) -> bool:
    return not _canon(_as_node(e))
