"""Single-pole rational activation functions.

The activation is the type ``(d, 1)`` Padé approximant of a seed
``omega(z) = phi(z) / (z - z0)`` with ``|z0| > 1``.  Its one pole is what the
hidden layer shifts and scales onto each singularity of the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import laurent, numkit
from .errors import NumericalError, ValidationError
from .pade import build_toeplitz, normalize_null_vector

__all__ = [
    "INFINITY",
    "PHI_FUNCTIONS",
    "SeedFunction",
    "Activation",
    "make_seed",
    "build_activation",
    "eval_activation",
]

INFINITY = complex(np.inf, np.inf)
POLE_RTOL = 1e-13

PHI_FUNCTIONS = {
    "cos": np.cos,
    "one": lambda z: np.ones_like(np.asarray(z, dtype=np.complex128)),
}


@dataclass(frozen=True)
class SeedFunction:
    """``omega(z) = phi(z) / (z - z0)`` as a vectorized callable."""

    evaluator: Callable
    z0: complex
    description: str = ""

    def __post_init__(self):
        z0 = complex(self.z0)
        if not abs(z0) > 1:
            raise ValidationError(f"seed pole must lie outside the unit circle, got |z0| = {abs(z0)}")
        object.__setattr__(self, "z0", z0)

    def __call__(self, z):
        return self.evaluator(z)


def make_seed(phi="cos", z0=-1.2):
    """Seed built from a named entire function ``phi``."""
    if phi not in PHI_FUNCTIONS:
        raise ValidationError(f"unknown phi {phi!r}; choose from {sorted(PHI_FUNCTIONS)}")
    fn = PHI_FUNCTIONS[phi]
    z0 = complex(z0)
    return SeedFunction(lambda z: fn(z) / (z - z0), z0, f"{phi}(z)/(z - ({z0}))")


@dataclass(frozen=True)
class Activation:
    """``r(z) = (sum_j alpha_j z^j) / (gamma0 + gamma1 z)``."""

    alpha: np.ndarray
    gamma0: complex
    gamma1: complex
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        alpha = numkit.as_complex_vector(self.alpha, "alpha")
        if alpha.size == 0:
            raise ValidationError("alpha must have at least one entry")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma0", complex(self.gamma0))
        object.__setattr__(self, "gamma1", complex(self.gamma1))

    @property
    def num_degree(self):
        return self.alpha.size - 1

    @property
    def gamma(self):
        return np.array([self.gamma0, self.gamma1])

    @property
    def pole(self):
        """``-gamma0 / gamma1``; infinite when ``gamma1 = 0``."""
        if self.gamma1 == 0:
            return INFINITY
        return -self.gamma0 / self.gamma1

    def __call__(self, z):
        return eval_activation(self, z)


def build_activation(seed, num_degree, n_samples=64):
    """Type ``(num_degree, 1)`` Padé approximant of ``seed`` at the origin.

    Parameters
    ----------
    seed : SeedFunction
    num_degree : int
        Numerator degree ``d = N + 1 - M``.
    n_samples : int
        Half the number of unit-circle samples used for the coefficients.

    Returns
    -------
    Activation

    Notes
    -----
    Taylor coefficients enter with ``c_0`` unhalved, so the approximant
    matches ``omega`` itself; the halving belongs to splitting a two-sided
    series and the seed is one-sided.
    """
    if num_degree < 0:
        raise ValidationError("num_degree must be >= 0")
    if n_samples < num_degree + 2:
        raise ValidationError(f"n_samples must be >= num_degree + 2 = {num_degree + 2}")
    window = laurent.compute_coefficients(laurent.sample_function(seed, n_samples, rho=1.0))
    c = np.array([window[k] for k in range(num_degree + 2)])
    row = build_toeplitz(c, num_degree, 1)
    if np.all(np.abs(row) <= 1e-14 * np.linalg.norm(c)):
        raise NumericalError("seed function degenerate at this degree")
    gamma = numkit.svd(row).vh[-1].conj()
    (gamma,) = normalize_null_vector(gamma)
    alpha = np.convolve(c, gamma)[: num_degree + 1]
    return Activation(alpha, gamma[0], gamma[1],
                      {"z0": seed.z0, "description": seed.description, "n_samples": n_samples})


def eval_activation(a, z):
    """Evaluate ``r`` at scalar or array ``z``; points at the pole give ``INFINITY``."""
    z = np.asarray(z, dtype=np.complex128)
    num = numkit.polyval(a.alpha, z)
    den = a.gamma0 + a.gamma1 * z
    # rounding in the hidden affine map leaves a residue of a few ulps at the pole
    hit = np.abs(den) <= POLE_RTOL * (abs(a.gamma0) + np.abs(a.gamma1 * z))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(hit, INFINITY, num / np.where(hit, 1, den))
    return out[()] if out.ndim == 0 else out
