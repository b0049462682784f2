"""
Riccati 方程单元测试：数值求解、交比叠加、特解约化与可积性判据
"""
import math

import numpy as np
import pytest

from core.errors import (
    BlowUpError, ConfigError, CriterionRejected, DegenerateConfigurationError,
    ParticularSolutionError, PreconditionError,
)
from core.exprfn import parse
from core.numerics import EventKind, integrate_ode
from core.riccati import (
    RiccatiProblem, check_integrability, cross_ratio, linear_inhomogeneous_solve,
    projective_distance, reduce_with_particular, solve_bernoulli_reduced, solve_constant_riccati,
    solve_numeric, solve_via_criterion, superpose_cross_ratio,
)
from core.sl2 import INF, Sl2Coeffs, gauge_transform

TAN = Sl2Coeffs.of("1", "0", "1")


@pytest.mark.unit
class TestRiccatiProblem:
    """问题定义"""

    def test_invalid_interval(self):
        with pytest.raises(ConfigError):
            RiccatiProblem(TAN, 0.0, (1.0, 0.0))

    def test_nan_initial_value(self):
        with pytest.raises(ConfigError):
            RiccatiProblem(TAN, float('nan'))

    def test_infinite_initial_value_allowed(self):
        assert RiccatiProblem(TAN, INF).x0 == INF


@pytest.mark.unit
class TestProjectiveDistance:

    def test_values(self):
        assert projective_distance(INF, -INF) == 0.0
        assert projective_distance(0.0, INF) == 1.0
        assert projective_distance(1.0, -1.0) == pytest.approx(1.0)
        assert projective_distance(2.0, 2.0) == 0.0


@pytest.mark.unit
class TestSolveNumeric:
    """ẋ = 1 + x² 的解 tan(t) 在 π/2 处穿过 ∞"""

    GRID = np.linspace(0.0, 3.0, 31)

    def test_charts_cross_pole(self, tight_config):
        traj = solve_numeric(RiccatiProblem(TAN, 0.0, (0.0, 3.0)), self.GRID, tight_config, 'charts')
        assert len(traj) == 31
        poles = traj.event_times(EventKind.BLOW_UP)
        assert len(poles) == 1
        assert poles[0] == pytest.approx(math.pi / 2, abs=1e-8)
        assert traj.has_event(EventKind.CHART_SWITCH)
        for t, x in zip(self.GRID, traj.component(0)):
            assert projective_distance(x, math.tan(t)) < 1e-7

    def test_mobius_agrees_with_charts(self, tight_config):
        p = RiccatiProblem(TAN, 0.0, (0.0, 3.0))
        charts = solve_numeric(p, self.GRID, tight_config, 'charts')
        moebius = solve_numeric(p, self.GRID, tight_config, 'mobius')
        for a, b in zip(charts.component(0), moebius.component(0)):
            assert projective_distance(a, b) < 1e-7
        poles = moebius.event_times(EventKind.BLOW_UP)
        assert len(poles) == 1
        assert abs(poles[0] - math.pi / 2) < 0.1

    def test_start_at_infinity(self, tight_config):
        """x(0) = ∞ 时解为 −cot(t)"""
        grid = np.linspace(0.0, 1.0, 11)
        traj = solve_numeric(RiccatiProblem(TAN, INF), grid, tight_config)
        assert math.isinf(traj.component(0)[0])
        assert traj.event_times(EventKind.BLOW_UP)[0] == 0.0
        np.testing.assert_allclose(traj.component(0)[1:], -1.0 / np.tan(grid[1:]), rtol=1e-7)

    def test_unknown_method(self):
        with pytest.raises(ConfigError):
            solve_numeric(RiccatiProblem(TAN, 0.0), method='euler')


@pytest.mark.unit
class TestCrossRatio:
    """交比叠加"""

    def test_special_values(self):
        x1, x2, x3 = 0.3, -1.2, 2.5
        assert cross_ratio(x1, x1, x2, x3) == 0.0
        assert cross_ratio(x3, x1, x2, x3) == pytest.approx(1.0)
        assert math.isinf(cross_ratio(x2, x1, x2, x3))

    def test_superpose_inverts_cross_ratio(self):
        x1, x2, x3 = 0.3, -1.2, 2.5
        for x in (-3.0, 0.0, 0.7, 10.0):
            assert superpose_cross_ratio(x1, x2, x3, cross_ratio(x, x1, x2, x3)) == pytest.approx(x)
        assert superpose_cross_ratio(x1, x2, x3, 0.0) == pytest.approx(x1)
        assert superpose_cross_ratio(x1, x2, x3, 1.0) == pytest.approx(x3)
        assert superpose_cross_ratio(x1, x2, x3, INF) == pytest.approx(x2)

    def test_infinite_seed(self):
        """x₂ = ∞ 时交比退化为仿射比"""
        assert cross_ratio(3.0, 1.0, INF, 2.0) == pytest.approx(2.0)
        assert superpose_cross_ratio(1.0, INF, 2.0, 2.0) == pytest.approx(3.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            cross_ratio(0.0, 1.0, 1.0, 2.0)
        with pytest.raises(DegenerateConfigurationError):
            superpose_cross_ratio(INF, 0.0, INF, 0.5)

    def test_invariant_along_solutions(self, tight_config):
        """四个解的交比与时间无关，三个解加 k 重建第四个"""
        c = Sl2Coeffs.of("0.5 + 0.1*t", "-0.3", "0.2*cos(t)")
        grid = np.linspace(0.0, 2.0, 41)
        sols = [
            solve_numeric(RiccatiProblem(c, x0, (0.0, 2.0)), grid, tight_config).component(0)
            for x0 in (0.0, 0.5, 1.0, -0.7)
        ]
        x1, x2, x3, x = sols
        ks = [cross_ratio(a, b, cc, d) for d, a, b, cc in zip(x, x1, x2, x3)]
        assert np.max(np.abs(np.array(ks) - ks[0])) < 1e-7
        rebuilt = [superpose_cross_ratio(a, b, cc, ks[0]) for a, b, cc in zip(x1, x2, x3)]
        np.testing.assert_allclose(rebuilt, x, atol=1e-6)


@pytest.mark.unit
class TestReduction:
    """特解约化与求积公式"""

    C = Sl2Coeffs.of("1 - 0.5*t - 0.2*t^2", "0.5", "0.2")

    def test_reduce_with_particular(self):
        reduced = reduce_with_particular(self.C, parse("t"))
        assert reduced.b0.at(0.7) == 0.0
        assert reduced.b1.at(0.7) == pytest.approx(0.5 + 0.4 * 0.7)
        assert reduced.b2.at(0.7) == pytest.approx(0.2)

    def test_wrong_particular_solution(self):
        with pytest.raises(ParticularSolutionError) as info:
            reduce_with_particular(self.C, parse("t^2"))
        assert info.value.residual > 1e-6

    def test_bernoulli_closed_form(self):
        """ż = z + z², z(0) = 1 ⇒ z = eᵗ/(2 − eᵗ)"""
        c = Sl2Coeffs.of("0", "1", "1")
        t = 0.5
        expected = math.exp(t) / (2.0 - math.exp(t))
        assert solve_bernoulli_reduced(c, 1.0, t) == pytest.approx(expected, rel=1e-9)
        assert solve_bernoulli_reduced(c, 0.0, t) == 0.0
        assert solve_bernoulli_reduced(c, 0.3, 0.0) == 0.3

    def test_bernoulli_blow_up(self):
        """爆破点 ln 2 被区间括住"""
        with pytest.raises(BlowUpError) as info:
            solve_bernoulli_reduced(Sl2Coeffs.of("0", "1", "1"), 1.0, 1.0)
        lo, hi = info.value.bracket
        assert lo <= math.log(2.0) <= hi

    def test_bernoulli_requires_zero_b0(self):
        with pytest.raises(PreconditionError):
            solve_bernoulli_reduced(Sl2Coeffs.of("1", "1", "1"), 1.0, 0.5)

    def test_reduction_reproduces_numeric_solution(self, tight_config):
        """x = x₁ + z 与直接积分一致"""
        reduced = reduce_with_particular(self.C, parse("t"))
        x0 = 0.5
        grid = np.linspace(0.0, 1.0, 6)
        numeric = integrate_ode(self.C.riccati_rhs(), [x0], (0.0, 1.0), grid, tight_config)
        for t, x in zip(grid, numeric.component(0)):
            assert t + solve_bernoulli_reduced(reduced, x0, float(t)) == pytest.approx(x, abs=1e-8)

    def test_linear_inhomogeneous(self):
        """ẋ = t − x, x(0) = 0 ⇒ x = t − 1 + e⁻ᵗ"""
        value = linear_inhomogeneous_solve(parse("t"), -1.0, 0.0, 2.0)
        assert value == pytest.approx(1.0 + math.exp(-2.0), rel=1e-10)
        assert linear_inhomogeneous_solve(parse("t"), -1.0, 0.25, 1.0, 1.0) == 0.25


@pytest.mark.unit
class TestCriterion:
    """可积性判据"""

    def test_caldirola_kanai(self, ck_coeffs, ck_params):
        m0, mu, omega0 = ck_params
        report = check_integrability(ck_coeffs, interval=(0.0, 5.0))
        assert report.K == pytest.approx(mu / omega0, abs=1e-9)
        assert report.L == 1.0
        assert (report.target.c0, report.target.c2) == (1.0, 1.0)
        assert report.target.D.at(2.0) == pytest.approx(1.0)
        assert report.scaling.at(2.0) == pytest.approx(m0 * omega0 * math.exp(mu * 2.0))

    def test_rejection_carries_diagnostics(self):
        with pytest.raises(CriterionRejected) as info:
            check_integrability(Sl2Coeffs.of("1", "t", "1"))
        assert not info.value.diagnostics.is_constant
        assert len(info.value.k_samples) == 200

    def test_sign_change_is_precondition_failure(self):
        with pytest.raises(PreconditionError):
            check_integrability(Sl2Coeffs.of("t - 0.5", "0", "1"))

    def test_negative_product(self):
        report = check_integrability(Sl2Coeffs.of("1", "0", "-1"))
        assert report.L == -1.0
        assert report.target.c2 == -1.0
        assert report.K == pytest.approx(0.0, abs=1e-12)

    def test_time_dependent_rescaling(self):
        """D(t) 非常数时 D²c₀c₂ = b₀b₂"""
        c = Sl2Coeffs.of("1 + t", "0", "2*(1 + t)")
        grid = np.linspace(0.0, 1.0, 50)
        report = check_integrability(c, grid)
        target = report.target
        for t in grid:
            b0, _, b2 = c.evaluate(float(t))
            d = target.D.at(float(t))
            assert abs(d * d * target.c0 * target.c2 - b0 * b2) <= 1e-8 * (1.0 + abs(b0 * b2))

    def test_scaling_gauge_yields_target(self):
        c = Sl2Coeffs.of("2*exp(-0.3*t)", "0.1", "0.5*exp(0.3*t)")
        grid = np.linspace(0.0, 2.0, 40)
        report = check_integrability(c, grid)
        assert report.K == pytest.approx(0.4, abs=1e-9)
        transformed = gauge_transform(c, report.scaling_gauge()).sample(grid)
        np.testing.assert_allclose(transformed, report.target.as_coeffs().sample(grid), atol=1e-6)

    def test_negative_b0_split(self, tight_config):
        """b₀ < 0 时 c₀ = 1, c₂ = L，D 取负号，c₁ = −K"""
        c = Sl2Coeffs.of("-2*exp(-0.3*t)", "0.1", "-0.5*exp(0.3*t)")
        grid = np.linspace(0.0, 1.0, 40)
        report = check_integrability(c, grid)
        target = report.target
        assert report.K == pytest.approx(0.4, abs=1e-9)
        assert (target.c0, target.c2) == (1.0, report.L)
        assert target.c1 == pytest.approx(-0.4, abs=1e-9)
        assert target.D.at(0.5) == pytest.approx(-1.0)
        transformed = gauge_transform(c, report.scaling_gauge()).sample(grid)
        np.testing.assert_allclose(transformed, target.as_coeffs().sample(grid), atol=1e-6)

        p = RiccatiProblem(c, 0.3, (0.0, 1.0))
        closed = solve_via_criterion(p, grid, report=report)
        numeric = solve_numeric(p, grid, tight_config)
        for a, b in zip(closed.component(0), numeric.component(0)):
            assert projective_distance(a, b) < 1e-6

    def test_constant_flow(self):
        assert solve_constant_riccati(0.0, 1.0, 0.0, 0.7, 2.0) == pytest.approx(2.0 * math.exp(0.7))
        assert solve_constant_riccati(1.0, 0.0, 1.0, 0.4, 0.0) == pytest.approx(math.tan(0.4))
        with pytest.raises(PreconditionError):
            solve_constant_riccati(0.0, 0.0, 0.0, 1.0, 1.0)

    def test_solution_agrees_with_numeric(self, ck_coeffs, tight_config):
        """闭式解与数值解在投影距离下一致"""
        p = RiccatiProblem(ck_coeffs, 0.3, (0.0, 2.0))
        grid = np.linspace(0.0, 2.0, 41)
        closed = solve_via_criterion(p, grid)
        numeric = solve_numeric(p, grid, tight_config)
        for a, b in zip(closed.component(0), numeric.component(0)):
            assert projective_distance(a, b) < 1e-6
