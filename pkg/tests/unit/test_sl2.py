"""
SL(2,ℝ) 机制单元测试：矩阵、Möbius 作用、基本解、规范作用与李括号
"""
import math

import numpy as np
import pytest

from core.errors import GroupError, NotUnimodularError, VariableMismatchError
from core.exprfn import parse
from core.numerics import integrate_ode
from core.sl2 import (
    GENERATORS, INF, GaugeCurve, Mat2, Mat2Curve, PolyVectorField, Sl2Coeffs,
    algebra_matrix, as_rhs, bracket, expm_traceless, fundamental_solution, gauge_transform,
    is_closed, mobius, realizations, structure_constants,
)


def unimodular_gauge(alpha: str, beta: str, gamma: str) -> GaugeCurve:
    """由 α、β、γ 补出 δ = (1+βγ)/α"""
    return GaugeCurve.of(alpha, beta, gamma, f"(1 + ({beta})*({gamma}))/({alpha})")


@pytest.mark.unit
class TestMat2:
    """2×2 矩阵"""

    def test_algebra(self):
        m = Mat2(2.0, 1.0, 3.0, 4.0)
        assert m.det == 5.0
        assert m.trace == 6.0
        assert (m @ m.inverse()).close_to(Mat2.identity(), 1e-12)

    def test_normalized(self):
        m = Mat2(2.0, 0.0, 0.0, 2.0).normalized()
        assert m.is_unimodular()
        assert m.a == pytest.approx(1.0)

    def test_singular(self):
        with pytest.raises(GroupError):
            Mat2(1.0, 2.0, 2.0, 4.0).inverse()
        with pytest.raises(NotUnimodularError):
            Mat2(0.0, 1.0, 1.0, 0.0).normalized()

    def test_linear_apply(self):
        np.testing.assert_allclose(Mat2(1.0, 2.0, 3.0, 4.0).apply((1.0, -1.0)), [-1.0, -1.0])


@pytest.mark.unit
class TestMobius:
    """投影直线上的 Möbius 作用"""

    def test_finite(self):
        assert mobius(Mat2(1.0, 2.0, 3.0, 4.0), 1.0) == pytest.approx(3.0 / 7.0)

    def test_infinity(self):
        """∞ 映到 α/γ；γ=0 时保持 ∞"""
        assert mobius(Mat2(1.0, 2.0, 3.0, 4.0), INF) == pytest.approx(1.0 / 3.0)
        assert mobius(Mat2.identity(), INF) == INF
        assert mobius(Mat2.identity(), -INF) == INF

    def test_pole_maps_to_infinity(self):
        m = Mat2(1.0, 2.0, 2.0, 5.0)
        assert mobius(m, -2.5) == INF

    def test_composition(self):
        a, b = Mat2(1.0, 0.5, 0.0, 1.0), Mat2(2.0, 0.0, 1.0, 0.5)
        x = 0.3
        assert mobius(a @ b, x) == pytest.approx(mobius(a, mobius(b, x)))


@pytest.mark.unit
class TestExpm:
    """无迹矩阵指数的三种情形"""

    def test_hyperbolic(self):
        e = expm_traceless(Mat2(1.0, 0.0, 0.0, -1.0), 0.5)
        assert e.close_to(Mat2(math.exp(0.5), 0.0, 0.0, math.exp(-0.5)), 1e-12)

    def test_elliptic(self):
        e = expm_traceless(Mat2(0.0, 1.0, -1.0, 0.0), 0.7)
        assert e.close_to(Mat2(math.cos(0.7), math.sin(0.7), -math.sin(0.7), math.cos(0.7)), 1e-12)

    def test_parabolic(self):
        e = expm_traceless(GENERATORS[0], 2.0)
        assert e.close_to(Mat2(1.0, 2.0, 0.0, 1.0), 1e-12)

    def test_requires_traceless(self):
        with pytest.raises(GroupError):
            expm_traceless(Mat2.identity(), 1.0)

    def test_unimodular(self):
        assert expm_traceless(Mat2(0.3, 1.2, -0.7, -0.3), 1.9).is_unimodular(1e-12)


@pytest.mark.unit
class TestSl2Coeffs:
    """系数曲线"""

    def test_algebra_matrix(self):
        c = Sl2Coeffs.of("2", "t", "3")
        a = algebra_matrix(c, 4.0)
        expected = GENERATORS[0].scale(2.0) + GENERATORS[1].scale(4.0) + GENERATORS[2].scale(3.0)
        assert a.close_to(expected, 1e-15)

    def test_derivatives_and_scaling(self):
        c = Sl2Coeffs.of("t^2", "sin(t)", 1.5)
        assert c.derivatives(2.0) == pytest.approx((4.0, math.cos(2.0), 0.0))
        scaled = c.scaled("2*t")
        assert scaled.evaluate(1.0) == pytest.approx((2.0, 2 * math.sin(1.0), 3.0))
        assert not c.is_constant()
        assert Sl2Coeffs.of(1, 0, "2").is_constant()

    def test_rhs_forms(self):
        c = Sl2Coeffs.of("1", "2", "3")
        assert c.riccati_rhs()(0.0, np.array([2.0]))[0] == 17.0
        np.testing.assert_allclose(c.linear_rhs()(0.0, np.array([1.0, 2.0])), [3.0, -5.0])

    def test_inverse_chart_consistent(self):
        """w = 1/x 时 ẇ = −ẋ/x²"""
        c = Sl2Coeffs.of("1+t", "0.5", "-2")
        x, t = 0.8, 0.3
        xdot = c.riccati_rhs()(t, np.array([x]))[0]
        wdot = c.inverse_chart_rhs()(t, np.array([1.0 / x]))[0]
        assert wdot == pytest.approx(-xdot / x ** 2)


@pytest.mark.unit
class TestFundamentalSolution:
    """群上的方程"""

    def test_constant_coefficients_match_exponential(self, tight_config):
        c = Sl2Coeffs.of("1", "0.4", "2")
        grid = np.linspace(0.0, 2.0, 11)
        curve = fundamental_solution(c, (0.0, 2.0), grid, tight_config)
        a = algebra_matrix(c, 0.0)
        for t, m in zip(grid, curve):
            assert m.close_to(expm_traceless(a, t), 1e-8)
        assert curve.max_raw_det_drift() < 1e-8

    def test_riccati_and_oscillator_share_group_solution(self, tight_config):
        """同一基本解：Möbius 作用解 Riccati 方程，线性作用解振子"""
        c = Sl2Coeffs.of("1 + 0.5*sin(t)", "0.3*t", "-0.2*cos(t)")
        grid = np.linspace(0.0, 1.0, 21)
        curve = fundamental_solution(c, (0.0, 1.0), grid, tight_config)

        x0 = 0.4
        riccati = integrate_ode(c.riccati_rhs(), [x0], (0.0, 1.0), grid, tight_config)
        np.testing.assert_allclose(curve.act(x0), riccati.component(0), atol=1e-6)

        state = (0.7, -0.2)
        linear = integrate_ode(c.linear_rhs(), state, (0.0, 1.0), grid, tight_config)
        np.testing.assert_allclose(curve.act_linear(state), linear.states, atol=1e-6)


@pytest.mark.unit
class TestMat2Curve:
    """矩阵曲线"""

    def test_csv_header(self):
        curve = Mat2Curve(np.array([0.0, 1.0]), np.array([np.eye(2), np.eye(2)]))
        text = curve.to_csv()
        assert text.splitlines()[0] == 't,a,b,c,d'
        assert len(text.splitlines()) == 3

    def test_length_mismatch(self):
        with pytest.raises(GroupError):
            Mat2Curve(np.array([0.0]), np.array([np.eye(2), np.eye(2)]))


@pytest.mark.unit
class TestGauge:
    """规范作用"""

    GRID = np.linspace(0.0, 1.5, 31)

    @staticmethod
    def base_coeffs() -> Sl2Coeffs:
        return Sl2Coeffs.of("1 + 0.3*t", "-0.4*cos(t)", "0.5*exp(-0.2*t)")

    def test_diagonal_scales_solution(self):
        g = GaugeCurve.diagonal("exp(0.1*t)")
        assert mobius(g.at(1.0), 2.0) == pytest.approx(2.0 * math.exp(0.2))
        g.check_unimodular(self.GRID)

    def test_check_unimodular(self):
        with pytest.raises(NotUnimodularError):
            GaugeCurve.of("2", 0, 0, 1).check_unimodular([0.0])

    def test_identity_is_trivial(self):
        c = self.base_coeffs()
        np.testing.assert_allclose(gauge_transform(c, GaugeCurve.identity()).sample(self.GRID),
                                   c.sample(self.GRID), atol=1e-15)

    @pytest.mark.parametrize("g1,g2", [
        (("1 + 0.1*t", "0.2*sin(t)", "0.3*t"), ("1", "0.5*cos(t)", "0")),
        (("exp(0.2*t)", "0", "-0.1*t^2"), ("1 + 0.2*t^2", "0.1", "0.4*sin(2*t)")),
        (("2", "0.5", "0.25"), ("cos(0.1*t) + 1", "t", "-0.3")),
    ])
    def test_action_property(self, g1, g2):
        """先 g₁ 再 g₂ 与乘积 g₂·g₁ 一致"""
        c = self.base_coeffs()
        first, second = unimodular_gauge(*g1), unimodular_gauge(*g2)
        first.check_unimodular(self.GRID, 1e-12)
        two_step = gauge_transform(gauge_transform(c, first), second)
        composed = gauge_transform(c, second.compose(first))
        np.testing.assert_allclose(two_step.sample(self.GRID), composed.sample(self.GRID), atol=1e-8)

    def test_pullback_solves_transformed_system(self, tight_config):
        """x(t) 解原方程，则 g(t)·x(t) 解变换后的方程"""
        c = self.base_coeffs()
        g = unimodular_gauge("1 + 0.2*t", "0.1*sin(t)", "0.15*t")
        x0 = 0.3
        original = integrate_ode(c.riccati_rhs(), [x0], (0.0, 1.5), self.GRID, tight_config)
        mapped = [mobius(g.at(t), x) for t, x in zip(self.GRID, original.component(0))]

        transformed = gauge_transform(c, g)
        direct = integrate_ode(transformed.riccati_rhs(), [mobius(g.at(0.0), x0)], (0.0, 1.5),
                               self.GRID, tight_config)
        np.testing.assert_allclose(direct.component(0), mapped, atol=1e-6)

    def test_translation_by_particular_solution(self):
        """以特解 x₁ = t 平移后 b'₀ 消失"""
        c = Sl2Coeffs.of("1 - 0.5*t - 0.2*t^2", "0.5", "0.2")
        reduced = gauge_transform(c, GaugeCurve.translation("t"))
        samples = reduced.sample(self.GRID)
        assert np.max(np.abs(samples[:, 0])) <= 1e-8
        np.testing.assert_allclose(samples[:, 1], 0.5 + 0.4 * self.GRID, atol=1e-12)
        np.testing.assert_allclose(samples[:, 2], 0.2, atol=1e-12)


@pytest.mark.unit
class TestBrackets:
    """向量场实现的对易关系"""

    @pytest.mark.parametrize("family,fields", [
        ('riccati', realizations.riccati_fields()),
        ('tdho', realizations.tdho_fields()),
        ('sode', realizations.sode_fields(1)),
        ('sode', realizations.sode_fields(2)),
        ('pinney', realizations.pinney_fields(1.5)),
        ('ermakov', realizations.ermakov_fields()),
        ('generalized_ermakov', realizations.generalized_ermakov_fields(parse("1 + u^2"), parse("2*u"))),
        ('pinney_triple', realizations.pinney_triple_fields(2.0)),
    ])
    def test_stated_relations_hold(self, family, fields):
        results = realizations.verify_relations(family, fields)
        assert results
        assert all(ok for _, ok in results), results

    def test_structure_constants(self):
        fields = list(realizations.riccati_fields().values())
        c = structure_constants(fields, seed=7)
        np.testing.assert_allclose(c[0, 1], [1.0, 0.0, 0.0])
        np.testing.assert_allclose(c[0, 2], [0.0, 2.0, 0.0])
        np.testing.assert_allclose(c[1, 2], [0.0, 0.0, 1.0])
        np.testing.assert_allclose(c[1, 0], -c[0, 1])

    def test_not_closed(self):
        """∂x 与 x³∂x 不生成有限维李代数"""
        fields = [
            PolyVectorField((parse("1"),), ('x',), 'A'),
            PolyVectorField((parse("x^3"),), ('x',), 'B'),
        ]
        with pytest.raises(GroupError):
            structure_constants(fields)
        assert not is_closed(fields)

    def test_variable_mismatch(self):
        a = PolyVectorField((parse("1"),), ('x',))
        b = PolyVectorField((parse("1"),), ('y',))
        with pytest.raises(VariableMismatchError):
            bracket(a, b)
        with pytest.raises(VariableMismatchError):
            PolyVectorField((parse("1"), parse("x")), ('x',))

    def test_as_rhs(self):
        """Pinney 场 L₂ 的右端"""
        rhs = as_rhs(realizations.pinney_fields(1.0)['L2'])
        np.testing.assert_allclose(rhs(0.0, np.array([2.0, 3.0])), [3.0, 1.0 / 8.0])
