"""Dense numerical kernels used by every other module.

All functions take and return NumPy arrays of ``complex128``.  Polynomial
coefficient vectors are ordered constant-first throughout the package,
``c[k]`` multiplying ``z**k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

__all__ = [
    "SvdResult",
    "as_complex_vector",
    "fft",
    "ifft",
    "svd",
    "least_squares",
    "polynomial_roots",
    "polyval",
    "polymul",
    "poly_from_roots",
]


def as_complex_vector(values, name="vector"):
    """Return ``values`` as a finite 1-D complex array or raise."""
    v = np.asarray(values, dtype=np.complex128)
    if v.ndim != 1:
        v = v.reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} contains non-finite entries")
    return v


def fft(samples):
    """Unnormalized DFT, ``out[k] = sum_j samples[j] * exp(-2j*pi*j*k/len)``.

    Any length >= 1 is accepted (pocketfft handles non power-of-two sizes).
    """
    x = as_complex_vector(samples, "samples")
    if x.size == 0:
        raise ValidationError("empty sample vector")
    return np.fft.fft(x)


def ifft(spectrum):
    """Inverse of :func:`fft` via the conjugation identity."""
    y = as_complex_vector(spectrum, "spectrum")
    if y.size == 0:
        raise ValidationError("empty sample vector")
    return np.conj(fft(np.conj(y))) / y.size


@dataclass(frozen=True)
class SvdResult:
    """Full SVD ``m = u @ diag(s) @ vh``; columns of ``vh.conj().T`` are V."""

    singular_values: np.ndarray
    u: np.ndarray
    vh: np.ndarray

    @property
    def v(self):
        return self.vh.conj().T


def svd(m):
    """Full singular value decomposition of a complex matrix.

    No truncation happens here; callers threshold the singular values.
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"svd needs a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains non-finite entries")
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return SvdResult(s, u, vh)


def least_squares(a, b):
    """Minimize ``||a @ x - b||_2``.

    Returns
    -------
    x : ndarray
        Minimizer (minimum-norm when ``a`` is rank deficient).
    residual_norm : float
        ``||a @ x - b||_2`` evaluated directly.
    rank_deficient : bool
        True when the numerical rank of ``a`` is below its column count.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = as_complex_vector(b, "b")
    if a.ndim != 2:
        raise ValidationError("least_squares needs a 2-D matrix")
    if a.shape[0] != b.size:
        raise ValidationError(f"dimension mismatch: matrix has {a.shape[0]} rows, rhs has {b.size}")
    if a.shape[0] < a.shape[1]:
        raise ValidationError("least_squares expects rows >= cols")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains non-finite entries")
    x, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual, bool(rank < a.shape[1])


def polynomial_roots(coeffs):
    """All roots of ``sum_k coeffs[k] z**k`` from the companion matrix.

    LAPACK's nonsymmetric eigensolver balances the matrix before the QR
    iteration, which keeps the moderate degrees used here (< ~100) accurate.
    """
    c = as_complex_vector(coeffs, "coeffs")
    if c.size == 0 or c[-1] == 0:
        raise ValidationError("degree collapse; trim first")
    deg = c.size - 1
    if deg == 0:
        return np.empty(0, dtype=np.complex128)
    comp = np.zeros((deg, deg), dtype=np.complex128)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def polyval(coeffs, z):
    """Horner evaluation of ``sum_k coeffs[k] z**k``; ``z`` may be an array."""
    c = np.asarray(coeffs, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    for ck in c[::-1]:
        out = out * z + ck
    return out[()] if out.ndim == 0 else out


def polymul(a, b):
    return np.convolve(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def poly_from_roots(roots, lead=1.0):
    """Constant-first coefficients of ``lead * prod(z - r)``."""
    out = np.array([lead], dtype=np.complex128)
    for r in roots:
        out = polymul(out, [-r, 1.0])
    return out
