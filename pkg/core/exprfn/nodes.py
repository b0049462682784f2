"""表达式 AST

节点均为不可变 dataclass，结构相等即可比较与哈希；TimeExpr 包装根节点，
并缓存编译后的求值闭包，可在多线程间共享。
"""

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Iterable, Mapping, Set, Union

from core.errors import ExprDomainError, UnboundVariableError

Number = Union[int, float]
Bindings = Mapping[str, float]

FUNCTIONS = ('sin', 'cos', 'tan', 'exp', 'ln', 'sqrt')

# 打印优先级
PREC_ADD = 1
PREC_MUL = 2
PREC_NEG = 3
PREC_POW = 4
PREC_ATOM = 5


class Node:
    """AST 节点基类"""

    precedence = PREC_ATOM

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Const(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node
    precedence = PREC_ADD


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node
    precedence = PREC_ADD


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node
    precedence = PREC_MUL


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node
    precedence = PREC_MUL


@dataclass(frozen=True)
class Neg(Node):
    arg: Node
    precedence = PREC_NEG


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Node
    precedence = PREC_POW


@dataclass(frozen=True)
class Func(Node):
    name: str
    arg: Node


# ---------------------------------------------------------------- 常量折叠构造器

def _is_const(node: Node, value: float = None) -> bool:
    if not isinstance(node, Const):
        return False
    return value is None or node.value == value


def _finite_const(value: float):
    """折叠结果必须有限，否则放弃折叠"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return Const(float(value))


def add(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        folded = _finite_const(a.value + b.value)
        if folded is not None:
            return folded
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def sub(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        folded = _finite_const(a.value - b.value)
        if folded is not None:
            return folded
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        folded = _finite_const(a.value * b.value)
        if folded is not None:
            return folded
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return Const(0.0)
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    return Mul(a, b)


def div(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b) and b.value != 0.0:
        folded = _finite_const(a.value / b.value)
        if folded is not None:
            return folded
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return Const(0.0)
    return Div(a, b)


def neg(a: Node) -> Node:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(base: Node, exponent: Node) -> Node:
    if _is_const(exponent, 1.0):
        return base
    if _is_const(exponent, 0.0):
        return Const(1.0)
    if _is_const(base) and _is_const(exponent):
        try:
            folded = _finite_const(_pow_value(base.value, exponent.value, None))
        except (ExprDomainError, OverflowError):
            folded = None
        if folded is not None:
            return folded
    return Pow(base, exponent)


def func(name: str, arg: Node) -> Node:
    if name not in FUNCTIONS:
        raise ValueError(f"未知函数: {name}")
    if isinstance(arg, Const):
        try:
            folded = _finite_const(_FUNC_IMPL[name](arg.value, None))
        except (ExprDomainError, OverflowError):
            folded = None
        if folded is not None:
            return folded
    return Func(name, arg)


# ---------------------------------------------------------------- 数值实现

def _int_pow(b: float, n: int) -> float:
    """b^n，n ≥ 0，平方求幂"""
    result = 1.0
    while n:
        if n & 1:
            result *= b
        n >>= 1
        if n:
            b *= b
    return result


def _pow_value(b: float, e: float, node) -> float:
    if float(e).is_integer():
        n = int(e)
        result = _int_pow(b, abs(n))
        if n < 0:
            if result == 0.0:
                if b == 0.0:
                    raise ExprDomainError("零的负整数次幂", node)
                raise ExprDomainError("幂运算溢出", node)
            result = 1.0 / result
        if math.isinf(result):
            raise ExprDomainError("幂运算溢出", node)
        return result
    if b <= 0.0:
        raise ExprDomainError("非整数次幂要求底数为正", node)
    try:
        return math.pow(b, e)
    except OverflowError:
        raise ExprDomainError("幂运算溢出", node) from None


def _ln(x: float, node) -> float:
    if x <= 0.0:
        raise ExprDomainError("ln 的参数必须为正", node)
    return math.log(x)


def _sqrt(x: float, node) -> float:
    if x < 0.0:
        raise ExprDomainError("sqrt 的参数不能为负", node)
    return math.sqrt(x)


def _exp(x: float, node) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        raise ExprDomainError("exp 溢出", node)


_FUNC_IMPL: Dict[str, Callable[[float, object], float]] = {
    'sin': lambda x, node: math.sin(x),
    'cos': lambda x, node: math.cos(x),
    'tan': lambda x, node: math.tan(x),
    'exp': _exp,
    'ln': _ln,
    'sqrt': _sqrt,
}


def compile_node(node: Node) -> Callable[[Bindings], float]:
    """把 AST 编译为闭包，语义与逐节点求值一致"""
    if isinstance(node, Const):
        value = node.value
        return lambda b: value
    if isinstance(node, Var):
        name = node.name

        def var(b):
            try:
                return b[name]
            except KeyError:
                raise UnboundVariableError(name) from None
        return var
    if isinstance(node, Add):
        l, r = compile_node(node.left), compile_node(node.right)
        return lambda b: l(b) + r(b)
    if isinstance(node, Sub):
        l, r = compile_node(node.left), compile_node(node.right)
        return lambda b: l(b) - r(b)
    if isinstance(node, Mul):
        l, r = compile_node(node.left), compile_node(node.right)
        return lambda b: l(b) * r(b)
    if isinstance(node, Div):
        l, r = compile_node(node.left), compile_node(node.right)

        def divide(b):
            den = r(b)
            if den == 0.0:
                raise ExprDomainError("除以零", to_string(node.right))
            return l(b) / den
        return divide
    if isinstance(node, Neg):
        a = compile_node(node.arg)
        return lambda b: -a(b)
    if isinstance(node, Pow):
        base, exponent = compile_node(node.base), compile_node(node.exponent)
        text = to_string(node)
        return lambda b: _pow_value(base(b), exponent(b), text)
    if isinstance(node, Func):
        a = compile_node(node.arg)
        impl = _FUNC_IMPL[node.name]
        text = to_string(node)
        return lambda b: impl(a(b), text)
    raise TypeError(f"无法编译的节点: {node!r}")


# ---------------------------------------------------------------- 打印

def _wrap(node: Node, min_prec: int) -> str:
    text = to_string(node)
    return f"({text})" if node.precedence < min_prec else text


def to_string(node: Node) -> str:
    """打印为可被 parse 精确读回的文本"""
    if isinstance(node, TimeExpr):
        node = node.root
    if isinstance(node, Const):
        text = repr(node.value)
        return f"({text})" if node.value < 0 or text.startswith('-') else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, (Add, Sub)):
        op = '+' if isinstance(node, Add) else '-'
        return f"{_wrap(node.left, PREC_ADD)} {op} {_wrap(node.right, PREC_MUL)}"
    if isinstance(node, (Mul, Div)):
        op = '*' if isinstance(node, Mul) else '/'
        # 项首的负号作用于整个项，左操作数为 Neg 时必须加括号
        left = _wrap(node.left, PREC_POW if isinstance(node.left, Neg) else PREC_MUL)
        return f"{left}{op}{_wrap(node.right, PREC_NEG)}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg, PREC_ATOM)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, PREC_ATOM)}^{_wrap(node.exponent, PREC_POW)}"
    if isinstance(node, Func):
        return f"{node.name}({to_string(node.arg)})"
    raise TypeError(f"无法打印的节点: {node!r}")


def iter_nodes(node: Node) -> Iterable[Node]:
    yield node
    for child in children(node):
        yield from iter_nodes(child)


def children(node: Node):
    if isinstance(node, (Add, Sub, Mul, Div)):
        return (node.left, node.right)
    if isinstance(node, Neg):
        return (node.arg,)
    if isinstance(node, Pow):
        return (node.base, node.exponent)
    if isinstance(node, Func):
        return (node.arg,)
    return ()


def _as_node(value) -> Node:
    if isinstance(value, TimeExpr):
        return value.root
    if isinstance(value, Node):
        return value
    if isinstance(value, (int, float)):
        return Const(float(value))
    raise TypeError(f"无法转换为表达式: {value!r}")


# ---------------------------------------------------------------- TimeExpr

@dataclass(frozen=True)
class TimeExpr:
    """标量表达式，t 与状态变量的函数"""

    root: Node

    @cached_property
    def _compiled(self) -> Callable[[Bindings], float]:
        return compile_node(self.root)

    def evaluate(self, bindings: Bindings = None, **kwargs: float) -> float:
        if kwargs:
            bindings = {**(bindings or {}), **kwargs}
        return self._compiled(bindings or {})

    def at(self, t: float) -> float:
        """只依赖 t 的表达式在 t 处求值"""
        return self._compiled({'t': t})

    def compile(self) -> Callable[[Bindings], float]:
        return self._compiled

    def free_variables(self) -> Set[str]:
        return free_variables(self)

    def is_constant(self) -> bool:
        return isinstance(self.root, Const)

    def __str__(self) -> str:
        return to_string(self.root)

    # 运算符重载，构造时即做常量折叠
    def __add__(self, other):
        return TimeExpr(add(self.root, _as_node(other)))

    def __radd__(self, other):
        return TimeExpr(add(_as_node(other), self.root))

    def __sub__(self, other):
        return TimeExpr(sub(self.root, _as_node(other)))

    def __rsub__(self, other):
        return TimeExpr(sub(_as_node(other), self.root))

    def __mul__(self, other):
        return TimeExpr(mul(self.root, _as_node(other)))

    def __rmul__(self, other):
        return TimeExpr(mul(_as_node(other), self.root))

    def __truediv__(self, other):
        return TimeExpr(div(self.root, _as_node(other)))

    def __rtruediv__(self, other):
        return TimeExpr(div(_as_node(other), self.root))

    def __pow__(self, other):
        return TimeExpr(power(self.root, _as_node(other)))

    def __rpow__(self, other):
        return TimeExpr(power(_as_node(other), self.root))

    def __neg__(self):
        return TimeExpr(neg(self.root))


def as_expr(value) -> TimeExpr:
    """把数值、节点或 TimeExpr 统一为 TimeExpr"""
    if isinstance(value, TimeExpr):
        return value
    return TimeExpr(_as_node(value))


def const(value: Number) -> TimeExpr:
    return TimeExpr(Const(float(value)))


def var(name: str) -> TimeExpr:
    return TimeExpr(Var(name))


def _unary(name: str):
    def build(arg) -> TimeExpr:
        return TimeExpr(func(name, _as_node(arg)))
    build.__name__ = name
    return build


sin = _unary('sin')
cos = _unary('cos')
tan = _unary('tan')
exp = _unary('exp')
ln = _unary('ln')
sqrt = _unary('sqrt')


def evaluate(e: TimeExpr, bindings: Bindings) -> float:
    """在给定绑定下求值"""
    return e.evaluate(bindings)


def compile_expr(e: TimeExpr) -> Callable[[Bindings], float]:
    return e.compile()


def free_variables(e) -> Set[str]:
    root = _as_node(e)
    return {n.name for n in iter_nodes(root) if isinstance(n, Var)}


def _substitute_node(node: Node, mapping: Dict[str, Node]) -> Node:
    if isinstance(node, Var):
        return mapping.get(node.name, node)
    if isinstance(node, Const):
        return node
    if isinstance(node, Add):
        return Add(_substitute_node(node.left, mapping), _substitute_node(node.right, mapping))
    if isinstance(node, Sub):
        return Sub(_substitute_node(node.left, mapping), _substitute_node(node.right, mapping))
    if isinstance(node, Mul):
        return Mul(_substitute_node(node.left, mapping), _substitute_node(node.right, mapping))
    if isinstance(node, Div):
        return Div(_substitute_node(node.left, mapping), _substitute_node(node.right, mapping))
    if isinstance(node, Neg):
        return Neg(_substitute_node(node.arg, mapping))
    if isinstance(node, Pow):
        return Pow(_substitute_node(node.base, mapping), _substitute_node(node.exponent, mapping))
    if isinstance(node, Func):
        return Func(node.name, _substitute_node(node.arg, mapping))
    raise TypeError(f"无法代换的节点: {node!r}")


def substitute(e, mapping: Mapping[str, object]) -> TimeExpr:
    """把变量替换为表达式或数值，结构保持不变（不折叠）"""
    nodes = {name: _as_node(value) for name, value in mapping.items()}
    return TimeExpr(_substitute_node(_as_node(e), nodes))
