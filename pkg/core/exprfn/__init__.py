"""表达式：解析、求值、符号求导"""

from .nodes import (
    TimeExpr, as_expr, compile_expr, const, cos, evaluate, exp, free_variables,
    ln, sin, sqrt, substitute, tan, to_string, var,
)
from .parser import IDENTIFIERS, parse
from .derivative import differentiate
from .canonical import canonical, equivalent, is_zero

__all__ = [
    'TimeExpr', 'parse', 'evaluate', 'differentiate', 'to_string', 'substitute',
    'free_variables', 'compile_expr', 'as_expr', 'const', 'var',
    'sin', 'cos', 'tan', 'exp', 'ln', 'sqrt',
    'canonical', 'equivalent', 'is_zero', 'IDENTIFIERS',
]
