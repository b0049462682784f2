"""SL(2,ℝ) 机制：系数曲线、群方程、Möbius 作用、规范作用与李括号"""

from .coeffs import Sl2Coeffs
from .matrix import GENERATORS, INF, Mat2, Mat2Curve, expm_traceless, is_infinite, mobius
from .group import algebra_matrix, fundamental_solution
from .gauge import GaugeCurve, gauge_transform
from .vector_field import (
    PolyVectorField, as_rhs, bracket, check_relation, is_closed, linear_combination,
    structure_constants,
)
from . import realizations

__all__ = [
    'Sl2Coeffs', 'Mat2', 'Mat2Curve', 'GENERATORS', 'INF', 'mobius', 'is_infinite',
    'expm_traceless', 'algebra_matrix', 'fundamental_solution', 'GaugeCurve',
    'gauge_transform', 'PolyVectorField', 'bracket', 'linear_combination',
    'structure_constants', 'is_closed', 'check_relation', 'as_rhs', 'realizations',
]
