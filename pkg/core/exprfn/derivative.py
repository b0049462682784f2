"""符号求导

结果经过常量折叠构造器组装；对任意可表示的表达式封闭。
"""

from functools import lru_cache

from core.exprfn.nodes import (
    Add, Const, Div, Func, Mul, Neg, Node, Pow, Sub, TimeExpr, Var,
    add, div, free_variables, func, mul, neg, power, sub,
)

ZERO = Const(0.0)
ONE = Const(1.0)


def _depends_on(node: Node, name: str) -> bool:
    return name in free_variables(node)


@lru_cache(maxsize=4096)
def _d(node: Node, name: str) -> Node:
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Var):
        return ONE if node.name == name else ZERO
    if isinstance(node, Add):
        return add(_d(node.left, name), _d(node.right, name))
    if isinstance(node, Sub):
        return sub(_d(node.left, name), _d(node.right, name))
    if isinstance(node, Mul):
        a, b = node.left, node.right
        return add(mul(_d(a, name), b), mul(a, _d(b, name)))
    if isinstance(node, Div):
        a, b = node.left, node.right
        da, db = _d(a, name), _d(b, name)
        if db == ZERO:
            return div(da, b)
        return div(sub(mul(da, b), mul(a, db)), power(b, Const(2.0)))
    if isinstance(node, Neg):
        return neg(_d(node.arg, name))
    if isinstance(node, Pow):
        return _d_pow(node, name)
    if isinstance(node, Func):
        return _d_func(node, name)
    raise TypeError(f"无法求导的节点: {node!r}")


def _d_pow(node: Pow, name: str) -> Node:
    b, e = node.base, node.exponent
    db = _d(b, name)
    if not _depends_on(e, name):
        # n·b^(n-1)·b'
        return mul(mul(e, power(b, sub(e, ONE))), db)
    de = _d(e, name)
    # b^e·(e'·ln b + e·b'/b)
    return mul(node, add(mul(de, func('ln', b)), div(mul(e, db), b)))


def _d_func(node: Func, name: str) -> Node:
    u = node.arg
    du = _d(u, name)
    if du == ZERO:
        return ZERO
    if node.name == 'sin':
        outer = func('cos', u)
    elif node.name == 'cos':
        outer = neg(func('sin', u))
    elif node.name == 'tan':
        return div(du, power(func('cos', u), Const(2.0)))
    elif node.name == 'exp':
        outer = node
    elif node.name == 'ln':
        return div(du, u)
    elif node.name == 'sqrt':
        return div(du, mul(Const(2.0), node))
    else:
        raise TypeError(f"未知函数: {node.name}")
    return mul(outer, du)


def differentiate(e: TimeExpr, var: str = 't') -> TimeExpr:
    """对变量 var 求符号导数"""
    return TimeExpr(_d(e.root, var))
