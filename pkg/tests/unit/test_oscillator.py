"""
含时谐振子单元测试：系数、Caldirola–Kanai 自治化、可解频率族与叠加规则
"""
import math

import numpy as np
import pytest

from core.errors import GridMismatchError, OscillatorError, PoleInIntervalError
from core.exprfn import parse
from core.numerics import Trajectory, integrate_ode
from core.oscillator import (
    OscillatorKind, OscillatorSpec, PhaseState, QuarticReduction, ck_diagonal_audit,
    fundamental_linear_solve, hamilton_field, hamilton_rhs, invariant_superposition,
    linear_superposition, oscillator_pair_rhs, partial_superposition, quartic_family_spec,
    quartic_reduction_solve, quartic_reduction_state, reduce_ck_autonomous,
    solvable_frequency_family, to_sl2_coeffs, triangular_gauge, wronskian_invariants,
)
from core.riccati import check_integrability
from core.sl2 import Mat2, Sl2Coeffs, gauge_transform


@pytest.mark.unit
class TestOscillatorSpec:
    """振子定义与系数"""

    def test_caldirola_kanai_coefficients(self):
        spec = OscillatorSpec.caldirola_kanai(2.0, 0.2, 1.5)
        assert spec.kind == OscillatorKind.CALDIROLA_KANAI
        assert spec.param('mu') == 0.2
        c = to_sl2_coeffs(spec)
        t = 1.3
        assert c.evaluate(t) == pytest.approx(
            (math.exp(-0.2 * t) / 2.0, 0.0, 2.0 * 1.5 ** 2 * math.exp(0.2 * t)))

    def test_caldirola_kanai_requires_positive_mass(self):
        with pytest.raises(OscillatorError):
            OscillatorSpec.caldirola_kanai(0.0, 0.2, 1.0)

    def test_missing_parameter(self):
        with pytest.raises(OscillatorError):
            OscillatorSpec.generic("1", "2").param('mu')

    def test_generic_coefficients(self):
        c = to_sl2_coeffs(OscillatorSpec.generic("1 + t", "4"))
        assert c.evaluate(1.0) == pytest.approx((0.5, 0.0, 8.0))

    def test_td_frequency(self):
        spec = OscillatorSpec.td_frequency("1/(1+t)^2", 2.0)
        assert spec.omega2.at(1.0) == pytest.approx(1.0)
        assert to_sl2_coeffs(spec).b0.at(3.0) == 1.0

    def test_check_mass(self):
        OscillatorSpec.generic("1 + t", "1").check_mass(np.linspace(0, 1, 5))
        with pytest.raises(OscillatorError):
            OscillatorSpec.generic("t - 0.5", "1").check_mass(np.linspace(0, 1, 5))
        with pytest.raises(OscillatorError):
            OscillatorSpec.generic("ln(t)", "1").check_mass([0.0])

    def test_phase_state(self):
        assert PhaseState.from_array([1.0, 2.0]).as_array().tolist() == [1.0, 2.0]
        with pytest.raises(OscillatorError):
            PhaseState(float('inf'), 0.0)

    def test_hamilton_forms_agree(self):
        """Hamilton 方程与向量场组合一致"""
        spec = OscillatorSpec.caldirola_kanai(2.0, 0.3, 1.0)
        rhs = hamilton_rhs(spec)
        field = hamilton_field(spec)
        t, x, p = 0.8, 1.2, -0.4
        np.testing.assert_allclose(rhs(t, np.array([x, p])), field.evaluate({'t': t, 'x': x, 'p': p}))
        assert rhs(0.0, np.array([1.0, 2.0])) == pytest.approx([1.0, -2.0])


@pytest.mark.unit
class TestCaldirolaKanai:
    """CK 振子的自治化"""

    def test_reduced_matrix(self, ck_params):
        m0, mu, omega0 = ck_params
        red = reduce_ck_autonomous(m0, mu, omega0, (0.0, 5.0))
        assert red.matrix.close_to(Mat2(0.5 * mu, omega0, -omega0, -0.5 * mu), 1e-9)
        assert red.report.K == pytest.approx(mu / omega0, abs=1e-10)
        assert red.gauge.at(2.0).a ** 2 == pytest.approx(m0 * omega0 * math.exp(mu * 2.0))

    def test_reduced_solution_matches_hamilton(self, tight_config):
        m0, mu, omega0 = 1.5, 0.3, 2.0
        red = reduce_ck_autonomous(m0, mu, omega0, (0.0, 5.0))
        grid = np.linspace(0.0, 5.0, 26)
        oracle = integrate_ode(hamilton_rhs(OscillatorSpec.caldirola_kanai(m0, mu, omega0)),
                               [1.0, 0.5], (0.0, 5.0), grid, tight_config)
        states = np.array([red.solve(1.0, 0.5, float(t)) for t in grid])
        np.testing.assert_allclose(states, oracle.states, atol=1e-7)

    def test_round_trip_coordinates(self, ck_params):
        red = reduce_ck_autonomous(*ck_params, (0.0, 5.0))
        xr, pr = red.to_reduced(1.7, 0.4, -0.9)
        assert red.from_reduced(1.7, xr, pr) == pytest.approx((0.4, -0.9))

    def test_requires_positive_frequency(self):
        with pytest.raises(OscillatorError):
            reduce_ck_autonomous(1.0, 0.2, 0.0)

    def test_diagonal_audit(self, ck_params):
        """规范公式给出的对角元 ±μ/2 与数值解吻合，±μ 不吻合"""
        m0, mu, omega0 = ck_params
        audit = ck_diagonal_audit(m0, mu, omega0, t1=5.0)
        assert audit.matched == '+mu/2'
        assert audit.derived == pytest.approx(0.5 * mu)
        assert audit.errors['+mu/2'] <= 1e-6
        assert audit.errors['+mu'] > 1e-3
        lines = list(audit.lines())
        assert lines[0].startswith('derived_diagonal=')
        assert any(line.endswith(' match') and '+mu/2' in line for line in lines)


@pytest.mark.unit
class TestSolvableFamilies:
    """两族可解频率"""

    def test_inverse_square_family_recovers_k(self):
        spec = solvable_frequency_family(-1.0, 1.0, 1.0, (0.0, 5.0))
        assert spec.omega2.at(1.0) == pytest.approx(0.25)
        report = check_integrability(to_sl2_coeffs(spec), interval=(0.0, 5.0))
        assert report.K == pytest.approx(-1.0, abs=1e-8)

    def test_inverse_square_family_pole(self):
        with pytest.raises(PoleInIntervalError) as info:
            solvable_frequency_family(1.0, 1.0, 1.0, (0.0, 2.0))
        assert info.value.pole == pytest.approx(1.0)

    def test_tau_closed_form(self):
        q = QuarticReduction(1.0, 1.0, 1.0)
        assert q.tau(2.0) == pytest.approx(q.tau_closed(2.0), rel=1e-10)
        assert q.tau_closed(2.0) == pytest.approx(2.0 / 3.0)

    def test_quartic_pole(self):
        with pytest.raises(PoleInIntervalError):
            QuarticReduction(1.0, -1.0, 1.0).tau(2.0)
        assert QuarticReduction(1.0, 0.0, 1.0).pole() is None

    def test_quartic_matches_numeric(self, tight_config):
        """ẍ = −(1+t)⁻⁴x 的闭式解"""
        q = QuarticReduction(1.0, 1.0, 1.0)
        spec = quartic_family_spec(1.0, 1.0, 1.0)
        grid = np.linspace(0.0, 5.0, 26)
        oracle = integrate_ode(hamilton_rhs(spec), [1.0, 0.3], (0.0, 5.0), grid, tight_config)
        closed = np.array([quartic_reduction_state(q, 1.0, 0.3, float(t)) for t in grid])
        scale = np.maximum(1.0, np.abs(oracle.states))
        assert np.max(np.abs(closed - oracle.states) / scale) <= 1e-6

    def test_quartic_autonomous_limit(self):
        """u₁ = 0 时退化为余弦解"""
        q = QuarticReduction(1.0, 0.0, 2.0)
        for t in (0.5, 1.0, 3.0):
            assert quartic_reduction_solve(q, 1.0, 0.0, t) == pytest.approx(math.cos(2.0 * t), abs=1e-10)

    def test_triangular_gauge(self):
        """三角曲线把 (1, 0, ω₀²V⁻⁴) 化为 V⁻²(1, 0, ω₀²)"""
        u0, u1, w = 1.0, 0.5, 1.5
        spec = quartic_family_spec(u0, u1, w)
        transformed = gauge_transform(to_sl2_coeffs(spec), triangular_gauge(u0, u1))
        for t in np.linspace(0.0, 3.0, 7):
            v = u0 + u1 * t
            assert transformed.evaluate(float(t)) == pytest.approx((v ** -2, 0.0, w * w * v ** -2), abs=1e-12)

    def test_fundamental_linear_solve(self, tight_config):
        spec = OscillatorSpec.generic("1 + 0.1*t", "1 + 0.3*sin(t)")
        grid = np.linspace(0.0, 3.0, 16)
        traj = fundamental_linear_solve(to_sl2_coeffs(spec), 0.8, -0.2, (0.0, 3.0), grid, tight_config)
        oracle = integrate_ode(hamilton_rhs(spec), [0.8, -0.2], (0.0, 3.0), grid, tight_config)
        np.testing.assert_allclose(traj.states, oracle.states, atol=1e-7)


@pytest.mark.unit
class TestSuperposition:
    """线性、不变量与部分叠加"""

    GRID = np.linspace(0.0, 4.0, 41)

    def _pair(self, config, omega2="1 + 0.5*sin(t)"):
        spec = OscillatorSpec.generic("1", omega2)
        rhs = hamilton_rhs(spec)
        a = integrate_ode(rhs, [1.0, 0.0], (0.0, 4.0), self.GRID, config)
        b = integrate_ode(rhs, [0.0, 1.0], (0.0, 4.0), self.GRID, config)
        return rhs, a, b

    def test_linear_superposition(self, tight_config):
        rhs, a, b = self._pair(tight_config)
        combined = linear_superposition(a, b, 0.7, -1.3)
        direct = integrate_ode(rhs, [0.7, -1.3], (0.0, 4.0), self.GRID, tight_config)
        np.testing.assert_allclose(combined.states, direct.states, atol=1e-8)

    def test_wronskian_constant(self, tight_config):
        _, a, b = self._pair(tight_config)
        w = wronskian_invariants(a, b)
        assert np.max(np.abs(w - 1.0)) < 1e-8

    def test_invariant_superposition(self, tight_config):
        rhs, a, b = self._pair(tight_config)
        x0, v0 = 0.4, 0.9
        target = integrate_ode(rhs, [x0, v0], (0.0, 4.0), self.GRID, tight_config)
        F1 = x0 * 0.0 - 1.0 * v0
        F2 = x0 * 1.0 - 0.0 * v0
        rebuilt = invariant_superposition(a, b, F1, F2)
        np.testing.assert_allclose(rebuilt.states, target.states, atol=1e-8)

    def test_grid_mismatch(self, tight_config):
        _, a, _ = self._pair(tight_config)
        other = Trajectory(np.linspace(0.0, 1.0, 41), np.zeros((41, 2)))
        with pytest.raises(GridMismatchError):
            linear_superposition(a, other, 1.0, 1.0)

    def test_dependent_solutions(self, tight_config):
        _, a, _ = self._pair(tight_config)
        with pytest.raises(OscillatorError):
            invariant_superposition(a, a, 1.0, 1.0)

    def test_partial_superposition(self):
        """x₁ = cos t 时第二个解为 k'cos t + k sin t"""
        x1 = parse("cos(t)")
        t = 1.0
        value = partial_superposition(x1, 2.0, 0.5, t)
        assert value == pytest.approx(0.5 * math.cos(t) + 2.0 * math.sin(t), rel=1e-9)
        assert partial_superposition(x1, 0.0, 3.0, t) == pytest.approx(3.0 * math.cos(t))

    def test_partial_superposition_zero_of_seed(self):
        with pytest.raises(PoleInIntervalError):
            partial_superposition(parse("cos(t)"), 1.0, 1.0, 2.0)

    def test_pair_rhs(self):
        rhs = oscillator_pair_rhs(parse("2"))
        np.testing.assert_allclose(rhs(0.0, np.array([1.0, 0.0, 2.0, 1.0])), [0.0, -2.0, 1.0, -4.0])

    def test_sl2_coefficients_shared_with_riccati(self):
        """振子与 Riccati 方程共用 b₀ = 1/m, b₂ = mω²"""
        spec = OscillatorSpec.generic("2", "3")
        c = to_sl2_coeffs(spec)
        assert isinstance(c, Sl2Coeffs)
        assert c.evaluate(0.0) == pytest.approx((0.5, 0.0, 6.0))
