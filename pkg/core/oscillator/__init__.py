"""含时谐振子：SL(2,ℝ) 系数、可解族与叠加规则"""

from .spec import OscillatorKind, OscillatorSpec, PhaseState, hamilton_field, hamilton_rhs, to_sl2_coeffs
from .reduction import (
    CkReduction, DiagonalAudit, QuarticReduction, ck_diagonal_audit, fundamental_linear_solve,
    quartic_family_spec, quartic_reduction_solve, quartic_reduction_state, reduce_ck_autonomous,
    solvable_frequency_family, triangular_gauge,
)
from .superposition import (
    invariant_superposition, linear_superposition, oscillator_pair_rhs, partial_superposition,
    wronskian_invariants,
)

__all__ = [
    'OscillatorKind', 'OscillatorSpec', 'PhaseState', 'to_sl2_coeffs', 'hamilton_rhs',
    'hamilton_field', 'CkReduction', 'reduce_ck_autonomous', 'DiagonalAudit', 'ck_diagonal_audit',
    'solvable_frequency_family', 'QuarticReduction', 'quartic_family_spec', 'triangular_gauge',
    'quartic_reduction_solve', 'quartic_reduction_state', 'fundamental_linear_solve',
    'linear_superposition', 'wronskian_invariants', 'invariant_superposition',
    'partial_superposition', 'oscillator_pair_rhs',
]
