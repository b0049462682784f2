"""
Milne–Pinney 与 Ermakov 系统单元测试
"""
import math

import numpy as np
import pytest

from core.errors import (
    DegenerateInvariantsError, ErmakovError, PinneyDomainError, SingularIntegrandError,
)
from core.ermakov import (
    ErmakovState, GeneralizedErmakovSpec, PinneySpec, ermakov_invariant, ermakov_rhs,
    generalized_invariant, generalized_rhs, integrate_pinney, pinney_from_oscillators, pinney_rhs,
    pinney_superposition, select_branch, triple_invariants, triple_rhs, zero_guard,
)
from core.exprfn import parse
from core.numerics import EventKind, IntegratorConfig, integrate_ode
from core.oscillator import oscillator_pair_rhs
from tests.test_helpers import assert_drift_below

OMEGA2 = "1 + 0.3*sin(0.7*t)"


@pytest.mark.unit
class TestErmakovState:

    def test_xi(self):
        st = ErmakovState(2.0, 1.0, 3.0, 0.5)
        assert st.xi == pytest.approx(2.0 * 0.5 - 3.0 * 1.0)
        assert not st.is_triple

    def test_from_array(self):
        st = ErmakovState.from_array([1, 2, 3, 4, 5, 6])
        assert st.is_triple
        assert st.as_array().tolist() == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        with pytest.raises(ErmakovError):
            ErmakovState.from_array([1, 2, 3, 4, 5])


@pytest.mark.unit
class TestPinney:
    """Pinney 方程积分"""

    def test_rhs(self):
        """ẍ = −ω²x + k/x³"""
        rhs = pinney_rhs(PinneySpec.of(2.0, "1 + t"))
        np.testing.assert_allclose(rhs(1.0, np.array([0.5, 0.3])), [0.3, -2.0 * 0.5 + 2.0 / 0.125])
        with pytest.raises(PinneyDomainError):
            rhs(0.0, np.array([0.0, 1.0]))

    def test_equilibrium(self, tight_config):
        """ω ≡ 1, k = 1, x(0) = 1, ẋ(0) = 0 ⇒ x ≡ 1"""
        grid = np.linspace(0.0, 10.0, 51)
        traj = integrate_pinney(PinneySpec.of(1.0, "1"), 1.0, 0.0, (0.0, 10.0), grid, tight_config)
        np.testing.assert_allclose(traj.component(0), 1.0, atol=1e-10)
        assert not traj.events

    def test_zero_initial_value(self):
        with pytest.raises(PinneyDomainError):
            integrate_pinney(PinneySpec(), 0.0, 1.0, (0.0, 1.0))

    def test_zero_guard(self):
        guard = zero_guard(1)
        assert guard(0.0, np.array([5.0, 1e-9])) == EventKind.DOMAIN
        assert guard(0.0, np.array([5.0, 1e-3])) is None

    def test_free_particle_closed_form(self, tight_config):
        """ω = 0 时 x² = (1 + t²)，x(0) = 1, ẋ(0) = 0, k = 1"""
        grid = np.linspace(0.0, 3.0, 16)
        traj = integrate_pinney(PinneySpec.of(1.0, 0.0), 1.0, 0.0, (0.0, 3.0), grid, tight_config)
        np.testing.assert_allclose(traj.component(0), np.sqrt(1.0 + grid ** 2), rtol=1e-8)


@pytest.mark.unit
class TestErmakovInvariant:
    """ψ = k(x/y)² + ξ²"""

    def test_analytic_case(self):
        """x = sin t, y ≡ 1, k = 1, ω ≡ 1 ⇒ ψ = 1"""
        for t in np.linspace(0.0, 10.0, 21):
            st = ErmakovState(math.sin(t), math.cos(t), 1.0, 0.0)
            assert abs(ermakov_invariant(st, 1.0) - 1.0) <= 1e-10

    def test_conserved_along_flow(self):
        grid = np.linspace(0.0, 10.0, 101)
        traj = integrate_ode(ermakov_rhs(OMEGA2, 2.0), [0.5, 1.0, 1.0, 0.2], (0.0, 10.0), grid,
                             IntegratorConfig(rtol=1e-9, atol=1e-12))
        psi = [ermakov_invariant(ErmakovState.from_array(s), 2.0) for s in traj.states]
        assert_drift_below(psi, 1e-6, "ψ")

    def test_undefined_at_zero(self):
        with pytest.raises(PinneyDomainError):
            ermakov_invariant(ErmakovState(1.0, 0.0, 0.0, 1.0))


@pytest.mark.unit
class TestGeneralizedInvariant:
    """广义 Ermakov 系统的第一积分"""

    def test_integrand(self):
        spec = GeneralizedErmakovSpec.of("1 + u^2", "2*u")
        h = spec.integrand()
        u = 1.7
        assert h.evaluate(u=u) == pytest.approx(u * 2.0 / u - (1.0 + 1.0 / u ** 2) / u ** 3)

    def test_reduces_to_pinney_invariant(self):
        """f = k, g = 0 时与 I₁ 相差常数"""
        spec = GeneralizedErmakovSpec.of("1", "0")
        st = ErmakovState(1.3, 0.2, 0.7, -0.4)
        expected = 0.5 * st.xi ** 2 + 0.5 * ((st.y / st.x) ** 2 - 1.0)
        assert generalized_invariant(spec, st) == pytest.approx(expected, abs=1e-10)

    def test_conserved_along_flow(self, tight_config):
        spec = GeneralizedErmakovSpec.of("1 + 0.5*u^2", "2 + u", OMEGA2)
        grid = np.linspace(0.0, 3.0, 31)
        traj = integrate_ode(generalized_rhs(spec), [1.0, 0.1, 1.2, -0.1], (0.0, 3.0), grid, tight_config)
        values = [generalized_invariant(spec, ErmakovState.from_array(s)) for s in traj.states]
        assert_drift_below(values, 1e-7, "广义不变量")

    def test_path_through_singularity(self):
        spec = GeneralizedErmakovSpec.of("1", "0")
        with pytest.raises(SingularIntegrandError):
            generalized_invariant(spec, ErmakovState(-1.0, 0.0, 1.0, 0.0))

    def test_rhs_domain(self):
        rhs = generalized_rhs(GeneralizedErmakovSpec.of("1", "1"))
        with pytest.raises(PinneyDomainError):
            rhs(0.0, np.array([0.0, 1.0, 1.0, 0.0]))


@pytest.mark.unit
class TestTripleInvariants:
    """Pinney 变量与两个谐振子"""

    def test_equilibrium_values(self):
        I1, I2, W = triple_invariants(ErmakovState(1.0, 0.0, 1.0, 0.0, 0.0, 1.0), 1.0)
        assert (I1, I2, W) == pytest.approx((0.5, 0.5, 1.0))
        assert 4 * I1 * I2 - W * W == pytest.approx(0.0)

    def test_requires_triple(self):
        with pytest.raises(PinneyDomainError):
            triple_invariants(ErmakovState(1.0, 0.0, 1.0, 0.0))

    def test_conserved_along_flow(self, tight_config):
        grid = np.linspace(0.0, 10.0, 101)
        traj = integrate_ode(triple_rhs(OMEGA2, 1.5), [0.8, 0.3, 1.0, 0.0, 0.0, 1.0], (0.0, 10.0),
                             grid, tight_config)
        values = np.array([triple_invariants(ErmakovState.from_array(s), 1.5) for s in traj.states])
        for column, label in zip(values.T, ("I1", "I2", "W")):
            assert_drift_below(column, 1e-7, label)


@pytest.mark.unit
class TestPinneySuperposition:
    """由两个谐振子解重建 Pinney 解"""

    def test_equilibrium_example(self):
        """y = cos t, z = sin t, I₁ = I₂ = ½, W = 1 ⇒ x ≡ 1"""
        for t in np.linspace(0.0, 6.0, 13):
            x = pinney_superposition(math.cos(t), math.sin(t), 0.5, 0.5, 1.0, 1.0)
            assert x == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_invariants(self):
        with pytest.raises(DegenerateInvariantsError):
            pinney_superposition(1.0, 0.0, 0.5, 0.5, 0.0)
        with pytest.raises(DegenerateInvariantsError):
            pinney_superposition(1.0, 0.0, 0.1, 0.1, 1.0)

    def test_select_branch_prefers_matching_modulus(self):
        I1, I2, W = triple_invariants(ErmakovState(0.8, 0.3, 1.0, 0.0, 0.0, 1.0), 1.0)
        sign = select_branch(1.0, 0.0, 0.0, 1.0, I1, I2, W, 1.0, 0.8, 0.3)
        x = pinney_superposition(1.0, 0.0, I1, I2, W, 1.0, sign)
        assert x == pytest.approx(0.8)

    def _oscillators(self, config, grid):
        pair = integrate_ode(oscillator_pair_rhs(parse(OMEGA2)), [1.0, 0.0, 0.0, 1.0],
                             (grid[0], grid[-1]), grid, config)
        ytraj = pair.with_states(pair.states[:, :2])
        ztraj = pair.with_states(pair.states[:, 2:])
        return ytraj, ztraj

    def test_matches_direct_integration(self, tight_config):
        grid = np.linspace(0.0, 10.0, 101)
        ytraj, ztraj = self._oscillators(tight_config, grid)
        rebuilt = pinney_from_oscillators(ytraj, ztraj, 0.8, 0.3, 1.0)
        direct = integrate_pinney(PinneySpec.of(1.0, OMEGA2), 0.8, 0.3, (0.0, 10.0), grid, tight_config)
        x = direct.component(0)
        rel = np.abs(rebuilt.component(0) - x) / np.maximum(1.0, np.abs(x))
        assert np.max(rel) <= 1e-5

    def test_negative_orientation(self, tight_config):
        """x → −x 仍是解"""
        grid = np.linspace(0.0, 5.0, 51)
        ytraj, ztraj = self._oscillators(tight_config, grid)
        positive = pinney_from_oscillators(ytraj, ztraj, 0.8, 0.3, 1.0).component(0)
        negative = pinney_from_oscillators(ytraj, ztraj, -0.8, -0.3, 1.0).component(0)
        np.testing.assert_allclose(negative, -positive, atol=1e-12)
