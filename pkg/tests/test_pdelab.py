import math

import numpy as np
import pytest

from padenet import pdelab
from padenet.activation import INFINITY
from padenet.errors import NumericalError, ValidationError

V00 = 1.80416233283755969  # 1 + 0.1 (1 + b)/(1 - b), b = exp(-1/4), 30-digit arithmetic


@pytest.fixture(scope="module")
def cfg():
    return pdelab.PdeConfig()


class TestConfig:
    def test_blowup_time(self, cfg):
        assert abs(cfg.blowup_time - 0.25) <= 1e-15

    def test_truth_pair(self, cfg):
        z1, z2 = cfg.truth(0.0)
        assert abs(z1 - (-0.25j)) <= 1e-15 and z2 == -z1

    def test_times_out_of_range(self):
        with pytest.raises(ValidationError):
            pdelab.PdeConfig(times=(0.5, 1.5))

    @pytest.mark.parametrize("text, expected", [
        ("0:0.1:0.3", (0.0, 0.1, 0.2, 0.3)), ("0.4,0,0.8", (0.0, 0.4, 0.8))])
    def test_parse_times(self, text, expected):
        assert pdelab.parse_times(text) == expected


class TestExactSolution:
    def test_value_at_origin(self, cfg):
        assert abs(pdelab.exact_solution(cfg, 0.0, 0.0) - V00) <= 1e-14

    def test_no_pole_collapse(self):
        c = pdelab.PdeConfig(beta=0.0)
        np.testing.assert_allclose(pdelab.exact_solution(c, np.linspace(0, 6, 7), 0.3), 1.1)

    def test_singularity_marker(self, cfg):
        for t in (0.0, 0.1):
            z1, _ = cfg.truth(t)
            assert pdelab.exact_solution(cfg, z1, t) == INFINITY
            assert pdelab.exact_solution(cfg, 2 * np.pi - z1, t) == INFINITY

    def test_real_on_real_axis(self, cfg):
        v = pdelab.exact_solution(cfg, np.linspace(0, 2 * np.pi, 50), 0.6)
        assert np.max(np.abs(v.imag)) == 0


class TestSpectral:
    def test_init_without_pole(self):
        s = pdelab.init_spectral(pdelab.PdeConfig(beta=0.0))
        assert abs(s.coeff(0) - 1.1) <= 1e-15
        assert np.max(np.abs(np.delete(s.a, s.n))) <= 1e-15

    def test_init_real(self, cfg):
        assert pdelab.init_spectral(cfg).reality_defect <= 1e-15

    def test_init_geometric_modes(self, cfg):
        # v = eta + nu (1 + 2 sum_k q^k cos kx); the 2n-point DFT folds in q^(2n - k)
        s = pdelab.init_spectral(cfg)
        q, big = cfg.beta, 2 * cfg.n
        for k in (1, 5, 20):
            expected = cfg.nu * (q ** k + q ** (big - k)) / (1 - q ** big)
            assert abs(s.coeff(k) - expected) <= 1e-15
            assert abs(s.coeff(-k) - expected) <= 1e-15
        expected0 = cfg.eta + cfg.nu * (1 + q ** big) / (1 - q ** big)
        assert abs(s.coeff(0) - expected0) <= 1e-15

    def test_mean_conserved(self, cfg):
        s0 = pdelab.init_spectral(cfg)
        s = s0
        for _ in range(50):
            s = pdelab.step_ode(s, cfg.dt, cfg)
        assert abs(s.coeff(0) - s0.coeff(0)) <= 1e-14

    def test_linear_decay(self, cfg):
        s0 = pdelab.init_spectral(cfg)
        s = s0
        for _ in range(100):
            s = pdelab.step_ode(s, cfg.dt, cfg, nonlinear=False)
        k = np.arange(-s0.n, s0.n + 1)
        expected = s0.a * np.exp(-cfg.nu * k * k * 0.1)
        assert np.max(np.abs(s.a - expected)) <= 1e-8

    def test_rhs_against_direct_sum(self, rng):
        n = 5
        a = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
        k = np.arange(-n, n + 1)
        direct = np.zeros_like(a)
        for i, kk in enumerate(k):
            acc = 0j
            for j in range(-n, n + 1):
                ell = kk - j
                if abs(ell) <= n:
                    acc += np.sign(j) * a[j + n] * a[ell + n]
            direct[i] = -0.3 * kk * kk * a[i] + kk * acc
        np.testing.assert_allclose(pdelab.ode_rhs(a, 0.3), direct, atol=1e-12)

    def test_full_solve_at_04(self, cfg):
        states = pdelab.integrate(cfg, (0.4,))
        assert 0.4 in states, states.get("error")
        oracle = pdelab.exact_state(cfg, 0.4)
        assert np.max(np.abs(states[0.4].a - oracle.a)) <= 1e-5

    def test_blowup_raises(self):
        c = pdelab.PdeConfig()
        s = pdelab.SpectralState(0.0, np.full(9, 1e11, dtype=complex))
        with pytest.raises(NumericalError, match="spectral blow-up"):
            pdelab.step_ode(s, 1e-3, c)

    def test_integrate_records_error(self):
        c = pdelab.PdeConfig(times=(0.0, 1.0))
        out = pdelab.integrate(c)
        assert 0.0 in out
        if 1.0 not in out:
            assert "spectral blow-up" in out["error"]


class TestTracking:
    def test_fit_degrees_at_start(self, cfg):
        m = pdelab.fit_at_time(pdelab.exact_state(cfg, 0.0))
        assert (m.plus.degrees.n_deg, m.plus.degrees.m_deg) == (1, 1)
        assert (m.minus.degrees.n_deg, m.minus.degrees.m_deg) == (1, 1)
        assert m.plus.activation is m.minus.activation

    def test_errors_at_start(self, cfg):
        m = pdelab.fit_at_time(pdelab.exact_state(cfg, 0.0))
        track = pdelab.track_singularities(m, 0.0, cfg)
        assert len(track.estimates) == 2
        assert all(1e-10 <= e <= 1e-7 for e in track.errors)
        assert not any("branch" in f for f in track.flags)

    def test_estimates_straddle_axis(self, cfg):
        m = pdelab.fit_at_time(pdelab.exact_state(cfg, 0.8))
        track = pdelab.track_singularities(m, 0.8, cfg)
        signs = {sign: s for sign, s in track.estimates}
        assert signs["+"].imag < 0 < signs["-"].imag

    def test_near_blowup_flag(self, cfg):
        m = pdelab.fit_at_time(pdelab.exact_state(cfg, 0.1))
        track = pdelab.track_singularities(m, 0.25, cfg)
        assert all("near_blowup" in f for f in track.flags)

    def test_report_rows(self, cfg):
        rep = pdelab.trajectory_report(cfg, times=(0.0, 0.5))
        assert [r["t"] for r in rep["rows"]] == [0.0, 0.5]
        assert rep["blowup_time"] == pytest.approx(0.25)
        assert rep["checks"] == {"plus_equals_minus": True, "real": True}

    def test_bad_source(self, cfg):
        with pytest.raises(ValidationError):
            pdelab.trajectory_report(cfg, source="rk")

    def test_exponential_grid_shape(self, cfg):
        m = pdelab.fit_at_time(pdelab.exact_state(cfg, 0.4))
        table = pdelab.exponential_grid(m, (-math.pi, math.pi, 11), (-0.5, 0.5, 5))
        assert table.values.shape == (5, 11)
        z = table.re + 1j * table.im
        far = np.abs(z.imag) < 0.05
        exact = pdelab.exact_solution(cfg, z[far], 0.4)
        assert np.max(np.abs(table.values[far] - exact)) <= 1e-4
