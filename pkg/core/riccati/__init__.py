"""Riccati 方程：数值求解、交比叠加、特解约化与可积性判据"""

from .problem import IntegrabilityReport, RiccatiProblem, SolvableTarget
from .solver import CHART_THRESHOLD, projective_distance, solve_numeric
from .superposition import cross_ratio, superpose_cross_ratio
from .reduction import (
    linear_inhomogeneous_solve, particular_residual, reduce_with_particular, solve_bernoulli_reduced,
)
from .criterion import check_integrability, solve_constant_riccati, solve_via_criterion

__all__ = [
    'RiccatiProblem', 'SolvableTarget', 'IntegrabilityReport', 'CHART_THRESHOLD',
    'solve_numeric', 'projective_distance', 'cross_ratio', 'superpose_cross_ratio',
    'reduce_with_particular', 'particular_residual', 'solve_bernoulli_reduced',
    'linear_inhomogeneous_solve', 'check_integrability', 'solve_constant_riccati',
    'solve_via_criterion',
]
