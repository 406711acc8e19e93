"""Laurent coefficients from equispaced samples on a circle.

For a function analytic on ``|z| = rho`` the trapezoidal rule applied to the
Cauchy integral is a single DFT of the samples.  The 2n-point rule aliases
``c_k`` with ``c_{k + 2n m}``; sampling 4n points exposes the leading alias
term and gives a cheap error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkit
from .errors import ValidationError

__all__ = [
    "DEFAULT_RHO",
    "ContourSamples",
    "LaurentWindow",
    "contour_points",
    "sample_function",
    "compute_coefficients",
    "estimate_error",
    "split_windows",
]

DEFAULT_RHO = 0.99


def contour_points(n_points, rho=1.0):
    """``rho * exp(2 pi i j / n_points)`` for ``j = 0..n_points-1``."""
    j = np.arange(n_points)
    return rho * np.exp(2j * np.pi * j / n_points)


@dataclass(frozen=True)
class ContourSamples:
    """Values ``f(rho * exp(2 pi i j / 2n))``, ``j = 0..2n-1``."""

    rho: float
    values: np.ndarray

    def __post_init__(self):
        rho = float(self.rho)
        if not np.isfinite(rho) or rho <= 0:
            raise ValidationError(f"rho must be positive, got {self.rho}")
        vals = numkit.as_complex_vector(self.values, "values")
        if vals.size < 2 or vals.size % 2:
            raise ValidationError(f"sample count must be even and >= 2, got {vals.size}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.size // 2

    @property
    def points(self):
        return contour_points(self.values.size, self.rho)


def sample_function(f, n, rho=DEFAULT_RHO):
    """Sample a vectorized callable at the 2n contour nodes."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    z = contour_points(2 * n, rho)
    return ContourSamples(rho, np.asarray(f(z), dtype=np.complex128))


@dataclass(frozen=True)
class LaurentWindow:
    """Coefficients ``c_k`` for ``k = -n..n``; ``coeffs[k + n]`` is ``c_k``."""

    n: int
    rho: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (2 * self.n + 1,):
            raise ValidationError(f"window of n={self.n} needs {2 * self.n + 1} entries, got {c.size}")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, k):
        """``c_k``; indices outside ``[-n, n]`` read as 0."""
        if -self.n <= k <= self.n:
            return self.coeffs[k + self.n]
        return 0j

    @property
    def indices(self):
        return np.arange(-self.n, self.n + 1)

    def as_dict(self):
        return {int(k): complex(c) for k, c in zip(self.indices, self.coeffs)}


def compute_coefficients(s):
    """Trapezoidal-rule Laurent coefficients ``c_{-n}..c_n``.

    Parameters
    ----------
    s : ContourSamples

    Returns
    -------
    LaurentWindow
        ``c_k = rho**-k / (2n) * F[k mod 2n]`` with ``F`` the DFT of the samples.
    """
    if not isinstance(s, ContourSamples):
        s = ContourSamples(*s)
    n = s.n
    spectrum = numkit.fft(s.values)
    k = np.arange(-n, n + 1)
    c = spectrum[k % (2 * n)] * s.rho ** (-k.astype(float)) / (2 * n)
    return LaurentWindow(n, s.rho, c)


def estimate_error(s2n, s4n):
    """Leading aliasing error of the 2n-point coefficients.

    Returns an array indexed like :attr:`LaurentWindow.coeffs` holding
    ``rho**-k / (2n) * |G[k + 2n]|`` where ``G`` is the DFT of ``s4n``.
    """
    if s4n.values.size != 2 * s2n.values.size:
        raise ValidationError(
            f"refined samples must be twice as many: {s2n.values.size} vs {s4n.values.size}")
    if not np.isclose(s2n.rho, s4n.rho, rtol=1e-15, atol=0):
        raise ValidationError(f"rho mismatch: {s2n.rho} vs {s4n.rho}")
    n = s2n.n
    g = numkit.fft(s4n.values)
    k = np.arange(-n, n + 1)
    # G[k+2n] aliases c_{k+2n} and c_{k-2n}, the two leading error terms;
    # with the 1/(2n) scale this overestimates the true error by about 2
    return s2n.rho ** (-k.astype(float)) / (2 * n) * np.abs(g[(k + 2 * n) % (4 * n)])


def split_windows(w, n1_plus, m1_plus, n1_minus, m1_minus):
    """One-sided coefficient vectors for the outer and inner components.

    ``c_plus = (c_0/2, c_1, ..., c_{L+})`` and
    ``c_minus = (c_0/2, c_{-1}, ..., c_{-L-})`` with ``L = N1 + M1`` per side.
    """
    for name, v in (("n1_plus", n1_plus), ("m1_plus", m1_plus),
                    ("n1_minus", n1_minus), ("m1_minus", m1_minus)):
        if v < 0:
            raise ValidationError(f"{name} must be >= 0")
    lp, lm = n1_plus + m1_plus, n1_minus + m1_minus
    need = max(lp, lm)
    if w.n < need:
        raise ValidationError(f"window n={w.n} too small: need n >= {need} (short by {need - w.n})")
    c = w.coeffs
    mid = w.n
    c_plus = np.concatenate([[c[mid] / 2], c[mid + 1: mid + 1 + lp]])
    c_minus = np.concatenate([[c[mid] / 2], c[mid - 1::-1][:lm]])
    return c_plus, c_minus
