import numpy as np
import pytest

from twostate_mfg import (
    CesParams,
    IsoParams,
    SimplexPoint,
    ces_productivity,
    consumer_model,
    isoelastic_utility,
    paradigm_model,
    shock_model,
    zeta_grid,
)


class TestShockModel:
    def test_coupling_values(self):
        m = shock_model()
        assert m.f(1, SimplexPoint(0.25)) == 0.75
        assert m.f(2, SimplexPoint(0.25)) == 0.25

    def test_terminal_values(self):
        m = shock_model()
        assert m.psi(1, SimplexPoint(0.5)) == 0.0
        assert m.psi(2, SimplexPoint(0.2)) == pytest.approx(0.3)

    def test_potential_value(self):
        m = shock_model()
        assert m.potential.F(0.5, 0.5) == 0.25
        assert m.potential.Psi0(0.5, 0.5) == 0.0

    def test_coupling_is_gradient_of_potential(self):
        # centred differences off the simplex line, interior nodes, N = 100
        m = shock_model()
        n = 100
        zeta = zeta_grid(n)[1:-1]
        h = 1.0 / n
        d1 = (m.potential.F(zeta + h, 1.0 - zeta) - m.potential.F(zeta - h, 1.0 - zeta)) / (2 * h)
        d2 = (m.potential.F(zeta, 1.0 - zeta + h) - m.potential.F(zeta, 1.0 - zeta - h)) / (2 * h)
        theta = SimplexPoint(zeta)
        assert np.max(np.abs(m.f(1, theta) - d1)) <= 2.0 / n**2
        assert np.max(np.abs(m.f(2, theta) - d2)) <= 2.0 / n**2


class TestCes:
    def test_symmetric_point(self):
        p = CesParams(0.5, 0.9, 0.75)
        assert ces_productivity(1, SimplexPoint(0.5), p) == pytest.approx(0.5)

    def test_own_share_weighting(self):
        # state 2 at theta2 = 1 keeps only the own-share term: 0.1^(1/r)
        p = CesParams(0.5, 0.9, 0.75)
        expected = 0.1 ** (4.0 / 3.0)
        assert ces_productivity(2, SimplexPoint(0.0), p) == pytest.approx(
            expected, abs=1e-15
        )

    def test_symmetry_at_half_weight(self):
        p = CesParams(0.5, 0.9, 0.75)
        zeta = np.linspace(0.0, 1.0, 41)
        forward = ces_productivity(1, SimplexPoint(zeta), p)
        mirrored = ces_productivity(1, SimplexPoint(1.0 - zeta), p)
        np.testing.assert_allclose(forward, mirrored, atol=1e-12)

    def test_monotone_for_own_weight_above_half(self):
        p = CesParams(0.9, 0.9, 0.75)
        values = ces_productivity(1, SimplexPoint(zeta_grid(100)), p)
        assert np.all(np.diff(values) >= -1e-14)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            CesParams(a1=1.5)
        with pytest.raises(ValueError):
            CesParams(r=0.0)

    def test_paradigm_model_surfaces(self):
        m = paradigm_model(CesParams(0.5, 0.9, 0.75))
        assert m.potential is None
        assert m.f(1, SimplexPoint(0.5)) == pytest.approx(0.5)
        # terminal cost 1 - own share for both states
        assert m.psi(1, SimplexPoint(0.3)) == pytest.approx(0.7)
        assert m.psi(2, SimplexPoint(0.3)) == pytest.approx(0.3)


class TestConsumer:
    def test_log_utility_values(self):
        m = consumer_model(IsoParams(1.0, 0.1, 0.075))
        # full adoption: utility log(1) vanishes, only the price floor is left
        assert m.f(1, SimplexPoint(1.0)) == pytest.approx(0.1)
        assert m.f(2, SimplexPoint(0.0)) == pytest.approx(0.075)

    def test_power_utility_value(self):
        m = consumer_model(IsoParams(0.5, 0.075, 0.1))
        # s - (sqrt(theta) - 1)/(1/2) = 0.075 - 2 (0.5 - 1)
        assert m.f(1, SimplexPoint(0.25)) == pytest.approx(1.075)

    def test_clamp_at_empty_share(self):
        m = consumer_model(IsoParams(1.0, 0.1, 0.075), clamp_eps=1e-3)
        assert m.f(1, SimplexPoint(0.0)) == pytest.approx(0.1 - np.log(1e-3))

    def test_terminal_values(self):
        m = consumer_model(IsoParams(1.0, 0.1, 0.075))
        zeta = zeta_grid(10)
        np.testing.assert_allclose(m.psi(1, SimplexPoint(zeta)), 1.0 - zeta)
        np.testing.assert_allclose(m.psi(2, SimplexPoint(zeta)), zeta)

    def test_isoelastic_limit_matches_log(self):
        grid = np.clip(zeta_grid(100), 1e-3, 1.0)
        for eta in (1.0 - 1e-6, 1.0 + 1e-6):
            power = isoelastic_utility(grid, IsoParams(eta, 0.1, 0.075))
            assert np.max(np.abs(power - np.log(grid))) <= 1e-4

    def test_param_validation(self):
        with pytest.raises(ValueError):
            IsoParams(eta=0.0)
        with pytest.raises(ValueError):
            IsoParams(s1=-0.1)
        with pytest.raises(ValueError):
            consumer_model(IsoParams(), clamp_eps=0.0)
