import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from padenet import laurent
from padenet.errors import ValidationError
from padenet.testfunctions import EXFUN_N, EXFUN_RHO, exfun


def pole2(z):
    return 1.0 / (z - 2.0)


class TestContourSamples:
    def test_odd_count_rejected(self):
        with pytest.raises(ValidationError, match="even"):
            laurent.ContourSamples(1.0, np.ones(3))

    def test_nonpositive_rho_rejected(self):
        with pytest.raises(ValidationError, match="rho"):
            laurent.ContourSamples(0.0, np.ones(4))

    def test_points_on_circle(self):
        s = laurent.sample_function(pole2, 8, 0.5)
        np.testing.assert_allclose(np.abs(s.points), 0.5)
        assert s.n == 8


class TestComputeCoefficients:
    def test_constant(self):
        w = laurent.compute_coefficients(laurent.sample_function(lambda z: 5 + 0 * z, 8, 0.7))
        assert abs(w[0] - 5) <= 1e-14
        rest = np.delete(w.coeffs, w.n)
        assert np.max(np.abs(rest)) <= 1e-14

    def test_identity(self):
        w = laurent.compute_coefficients(laurent.sample_function(lambda z: z, 8, 1.0))
        assert abs(w[1] - 1) <= 1e-14
        assert np.max(np.abs(np.delete(w.coeffs, w.n + 1))) <= 1e-14

    def test_geometric_series(self):
        w = laurent.compute_coefficients(laurent.sample_function(pole2, 16, 1.0))
        for k in range(9):
            # c_k aliases c_{k + 32m}; exact sum of that geometric tail
            alias = -(2.0 ** -(k + 33)) / (1 - 2.0 ** -32)
            assert abs(w[k] + 2.0 ** -(k + 1)) <= 2.0 ** -(32 - k)
            assert abs(w[k] - (-(2.0 ** -(k + 1)) + alias)) <= 1e-16
        assert abs(w[0] + 0.5) <= 1e-9
        assert abs(w[1] + 0.25) <= 1e-9

    def test_entire_plus_principal_part(self):
        # cos z / (z + 1.2) + 1/z^2 on |z| = 1: Taylor part from a 40-digit series
        f = lambda z: np.cos(z) / (z + 1.2) + 1 / z ** 2
        w = laurent.compute_coefficients(laurent.sample_function(f, 64, 1.0))
        with mpmath.workdps(40):
            taylor = mpmath.taylor(lambda z: mpmath.cos(z) / (z + mpmath.mpf("1.2")), 0, 12)
        alias = 1.2 ** -120  # c_{k +- 128} folded in by the 128-point rule
        for k in range(13):
            assert abs(w[k] - complex(taylor[k])) <= alias
        assert abs(w[-2] - 1) <= alias and abs(w[-1]) <= alias

    def test_outside_window_reads_zero(self):
        w = laurent.compute_coefficients(laurent.sample_function(pole2, 4, 1.0))
        assert w[5] == 0 and w[-5] == 0

    @given(st.integers(2, 24), st.integers(0, 2**32 - 1))
    def test_trig_polynomial_round_trip(self, n, seed):
        r = np.random.default_rng(seed)
        deg = n - 1
        k = np.arange(-deg, deg + 1)
        c = r.normal(size=k.size) + 1j * r.normal(size=k.size)
        f = lambda z: sum(ck * z ** int(kk) for ck, kk in zip(c, k))
        w = laurent.compute_coefficients(laurent.sample_function(f, n, 1.0))
        got = np.array([w[int(kk)] for kk in k])
        np.testing.assert_allclose(got, c, rtol=0, atol=1e-12 * np.abs(c).max())

    def test_off_unit_radius(self):
        f = lambda z: 2 * z ** 3 - 1j / z ** 2
        w = laurent.compute_coefficients(laurent.sample_function(f, 6, 0.8))
        assert abs(w[3] - 2) <= 1e-12 and abs(w[-2] + 1j) <= 1e-12


class TestEstimateError:
    def test_polynomial_below_cutoff(self):
        s2 = laurent.sample_function(lambda z: z, 8, 1.0)
        s4 = laurent.sample_function(lambda z: z, 16, 1.0)
        assert np.max(laurent.estimate_error(s2, s4)) <= 1e-14

    def test_geometric_within_factor_ten(self):
        n = 16
        est = laurent.estimate_error(laurent.sample_function(pole2, n, 1.0),
                                     laurent.sample_function(pole2, 2 * n, 1.0))
        true = 2.0 ** (-2 * n - 1) / (1 - 2.0 ** (-2 * n))
        ratio = est[n] / true
        assert 0.1 <= ratio <= 10

    def test_length_mismatch(self):
        s = laurent.sample_function(pole2, 8, 1.0)
        with pytest.raises(ValidationError, match="twice"):
            laurent.estimate_error(s, s)

    def test_rho_mismatch(self):
        with pytest.raises(ValidationError, match="rho"):
            laurent.estimate_error(laurent.sample_function(pole2, 8, 1.0),
                                   laurent.sample_function(pole2, 16, 0.9))


class TestSplitWindows:
    def test_constant_halved(self):
        w = laurent.LaurentWindow(2, 1.0, [0, 0, 4, 0, 0])
        cp, cm = laurent.split_windows(w, 1, 1, 1, 1)
        np.testing.assert_array_equal(cp, [2, 0, 0])
        np.testing.assert_array_equal(cm, [2, 0, 0])

    def test_identity(self):
        w = laurent.compute_coefficients(laurent.sample_function(lambda z: z, 8, 1.0))
        cp, cm = laurent.split_windows(w, 2, 2, 2, 2)
        np.testing.assert_allclose(cp, [0, 1, 0, 0, 0], atol=1e-15)
        assert np.max(np.abs(cm)) <= 1e-15

    def test_exfun_lengths(self):
        w = laurent.compute_coefficients(laurent.sample_function(exfun, EXFUN_N, EXFUN_RHO))
        cp, cm = laurent.split_windows(w, 70, 70, 70, 70)
        assert cp.size == 141 and cm.size == 141

    def test_shortfall_named(self):
        w = laurent.LaurentWindow(2, 1.0, np.zeros(5))
        with pytest.raises(ValidationError, match="short by 1"):
            laurent.split_windows(w, 2, 1, 0, 0)

    @given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
    def test_sides_share_half_constant(self, a, b, c, d):
        n = max(a + b, c + d, 1)
        coeffs = np.arange(2 * n + 1, dtype=complex)
        cp, cm = laurent.split_windows(laurent.LaurentWindow(n, 1.0, coeffs), a, b, c, d)
        assert cp.size == a + b + 1 and cm.size == c + d + 1
        assert cp[0] + cm[0] == coeffs[n]
