"""表达式解析器

递归下降：
    expr   := term (("+"|"-") term)*
    term   := "-" term | factor (("*"|"/") factor)*
    factor := unary ("^" factor)?
    unary  := "-" unary | atom
    atom   := number | ident | func "(" expr ")" | "(" expr ")"

项首的负号作用于整个项（"-0.2*t" 为 neg(mul(0.2, t))，"-2^2" 为 -4），
乘除号或幂号之后的负号只作用于紧随的操作数。解析结果不做常量折叠。
"""

import logging
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional

from core.errors import ExprSyntaxError, UnknownIdentifierError
from core.exprfn.nodes import (
    FUNCTIONS, Add, Const, Div, Func, Mul, Neg, Node, Pow, Sub, TimeExpr, Var,
)

logger = logging.getLogger(__name__)

IDENTIFIERS: FrozenSet[str] = frozenset(
    {'t', 'x', 'y', 'z', 'v', 'vx', 'vy', 'vz', 'p', 'u'}
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

_OPERAND_START = ('number', 'identifier', '(', '-')


@dataclass(frozen=True)
class Token:
    kind: str       # number | ident | op | end
    text: str
    pos: int        # 字符位置


class _Parser:

    def __init__(self, text: str, identifiers: FrozenSet[str]):
        self.text = text
        self.identifiers = identifiers
        self.tokens = self._tokenize(text)
        self.index = 0

    def _offset(self, pos: int) -> int:
        return len(self.text[:pos].encode('utf-8'))

    def _tokenize(self, text: str) -> List[Token]:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ExprSyntaxError(f"非法字符 {text[pos]!r}", self._offset(pos), _OPERAND_START)
            kind = m.lastgroup
            if kind != 'ws':
                tokens.append(Token(kind, m.group(), pos))
            pos = m.end()
        tokens.append(Token('end', '', len(text)))
        return tokens

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _is_op(self, *ops: str) -> bool:
        return self.current.kind == 'op' and self.current.text in ops

    def _error(self, expected: Iterable[str]) -> ExprSyntaxError:
        token = self.current
        found = "输入结束" if token.kind == 'end' else f"记号 {token.text!r}"
        return ExprSyntaxError(f"意外的{found}", self._offset(token.pos), expected)

    def parse(self) -> Node:
        if self.current.kind == 'end':
            raise self._error(_OPERAND_START)
        node = self.expr()
        if self.current.kind != 'end':
            raise self._error(('+', '-', '*', '/', '^', 'end'))
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op('+', '-'):
            op = self._advance().text
            right = self.term()
            node = Add(node, right) if op == '+' else Sub(node, right)
        return node

    def term(self) -> Node:
        if self._is_op('-'):
            self._advance()
            return Neg(self.term())
        node = self.factor()
        while self._is_op('*', '/'):
            op = self._advance().text
            right = self.factor()
            node = Mul(node, right) if op == '*' else Div(node, right)
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self._is_op('^'):
            self._advance()
            return Pow(base, self.factor())
        return base

    def unary(self) -> Node:
        if self._is_op('-'):
            self._advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        token = self.current
        if token.kind == 'number':
            self._advance()
            return Const(float(token.text))
        if token.kind == 'ident':
            self._advance()
            name = token.text
            if name in FUNCTIONS:
                if not self._is_op('('):
                    raise self._error(('(',))
                self._advance()
                arg = self.expr()
                if not self._is_op(')'):
                    raise self._error((')', '+', '-', '*', '/', '^'))
                self._advance()
                return Func(name, arg)
            if name not in self.identifiers:
                raise UnknownIdentifierError(name, self._offset(token.pos))
            return Var(name)
        if self._is_op('('):
            self._advance()
            node = self.expr()
            if not self._is_op(')'):
                raise self._error((')', '+', '-', '*', '/', '^'))
            self._advance()
            return node
        raise self._error(_OPERAND_START)


def parse(text: str, extra_identifiers: Optional[Iterable[str]] = None) -> TimeExpr:
    """解析表达式文本

    Args:
        text: 表达式文本
        extra_identifiers: 额外允许的标识符（预设参数名等）

    Raises:
        ExprSyntaxError: 语法错误，带字节偏移与期望记号集合
        UnknownIdentifierError: 未知标识符
    """
    identifiers = IDENTIFIERS
    if extra_identifiers:
        identifiers = identifiers | frozenset(extra_identifiers)
    root = _Parser(text, identifiers).parse()
    logger.debug(f"解析表达式: {text!r}")
    return TimeExpr(root)
