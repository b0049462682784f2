"""Milne–Pinney 方程、Ermakov 系统及其不变量与叠加规则"""

from .pinney import ZERO_GUARD, ErmakovState, PinneySpec, integrate_pinney, pinney_rhs, zero_guard
from .invariants import (
    GeneralizedErmakovSpec, ermakov_invariant, ermakov_rhs, generalized_invariant, generalized_rhs,
    triple_invariants, triple_rhs,
)
from .superposition import pinney_from_oscillators, pinney_superposition, select_branch

__all__ = [
    'PinneySpec', 'ErmakovState', 'GeneralizedErmakovSpec', 'ZERO_GUARD', 'pinney_rhs',
    'integrate_pinney', 'zero_guard', 'ermakov_invariant', 'generalized_invariant',
    'triple_invariants', 'ermakov_rhs', 'generalized_rhs', 'triple_rhs',
    'pinney_superposition', 'select_branch', 'pinney_from_oscillators',
]
