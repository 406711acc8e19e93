"""Degree detection and Padé coefficients from a one-sided coefficient vector.

The Toeplitz matrix ``C_{N,M}`` built from ``c`` has a null vector ``q``
exactly when ``c`` is the Taylor series of a type-(N, M) rational function.
Counting singular values above ``tau = tol * ||c||`` shrinks ``(N, M)`` until
the matrix has full row rank; the null vector is then the denominator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .errors import DegeneracyWarning, ValidationError

__all__ = [
    "DEFAULT_TOL",
    "DegreeEstimate",
    "build_toeplitz",
    "estimate_degrees",
    "normalize_null_vector",
    "pade_numerator",
]

DEFAULT_TOL = 1e-14


@dataclass(frozen=True)
class DegreeEstimate:
    """Detected degrees and Padé coefficient vectors for one side.

    Attributes
    ----------
    n_deg, m_deg : int
        Final numerator and denominator degrees.
    p, q : ndarray
        Constant-first coefficients, lengths ``n_deg + 1`` and ``m_deg + 1``.
    tau : float
        Singular-value threshold ``tol * ||c||_2``.
    svd_iterations : int
        Number of times the reduction step lowered ``M1``.
    trim_log : list of (str, int)
        ``(stage, lambda)`` for every trimming step that removed entries.
    m_trace : list of int
        ``M1`` before the first SVD and after every reduction.
    svd_count : int
        Total SVDs computed.
    flags : tuple of str
        Diagnostic flags, e.g. ``"n_clamped"``.
    """

    n_deg: int
    m_deg: int
    p: np.ndarray
    q: np.ndarray
    tau: float
    svd_iterations: int
    trim_log: list = field(default_factory=list)
    m_trace: list = field(default_factory=list)
    svd_count: int = 0
    tol: float = DEFAULT_TOL
    flags: tuple = ()

    @property
    def is_analytic(self):
        return self.m_deg == 0


def build_toeplitz(c, n_deg, m_deg):
    """``M x (M+1)`` matrix with entry ``(k-1, l) = c[N + k - l]``.

    Indices outside ``[0, len(c) - 1]`` read as 0.  ``m_deg = 0`` gives an
    empty ``0 x 1`` matrix.
    """
    c = np.asarray(c, dtype=np.complex128)
    if n_deg < 0 or m_deg < 0:
        raise ValidationError("degrees must be nonnegative")
    k = np.arange(1, m_deg + 1)[:, None]
    ell = np.arange(m_deg + 1)[None, :]
    idx = n_deg + k - ell
    inside = (idx >= 0) & (idx < c.size)
    out = np.zeros((m_deg, m_deg + 1), dtype=np.complex128)
    out[inside] = c[idx[inside]]
    return out


def pade_numerator(c, q, n_deg):
    """``p_k = sum_{j <= min(k, M)} c[k - j] q[j]`` for ``k = 0..n_deg``."""
    c = np.asarray(c, dtype=np.complex128)
    full = np.convolve(np.pad(c, (0, max(0, n_deg + 1 - c.size))), q)
    return full[: n_deg + 1].copy()


def normalize_null_vector(v, *others):
    """Scale to unit norm with the last entry real positive.

    The same complex factor is applied to every array in ``others``.
    """
    v = np.asarray(v, dtype=np.complex128)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValidationError("cannot normalize a zero vector")
    last = v[-1]
    phase = np.conj(last) / abs(last) if last != 0 else 1.0
    scale = phase / nrm
    return (v * scale,) + tuple(np.asarray(o, dtype=np.complex128) * scale for o in others)


def _leading_small(v, tol):
    lam = 0
    while lam < v.size - 1 and abs(v[lam]) <= tol:
        lam += 1
    return lam


def _trailing_small(v, tol):
    lam = 0
    while lam < v.size - 1 and abs(v[v.size - 1 - lam]) <= tol:
        lam += 1
    return lam


def estimate_degrees(c, n1, m1, tol=DEFAULT_TOL):
    """Reduce ``(n1, m1)`` to numerically exact degrees and return ``p, q``.

    Parameters
    ----------
    c : array_like
        One-sided coefficients ``(c_0/2, c_{+-1}, ...)``, length >= n1 + m1 + 1.
    n1, m1 : int
        Upper bounds for the degrees.
    tol : float
        Relative singular-value threshold; the trimming steps compare the raw
        ``tol`` against coefficient magnitudes.

    Returns
    -------
    DegreeEstimate
    """
    c = numkit.as_complex_vector(c, "c")
    if n1 < 0 or m1 < 0:
        raise ValidationError("n1 and m1 must be nonnegative")
    if c.size < n1 + m1 + 1:
        raise ValidationError(f"need at least n1 + m1 + 1 = {n1 + m1 + 1} coefficients, got {c.size}")
    if not tol > 0:
        raise ValidationError("tol must be positive")

    tau = float(tol * np.linalg.norm(c))
    flags = []
    trace = [m1]
    svd_count = 0
    n_cur, m_cur = n1, m1
    q = None
    while m_cur > 0:
        res = numkit.svd(build_toeplitz(c, n_cur, m_cur))
        svd_count += 1
        mu = int(np.count_nonzero(res.singular_values > tau))
        if mu < m_cur:
            n_next = n_cur - (m_cur - mu)
            if n_next < 0:
                n_next = 0
                if "n_clamped" not in flags:
                    flags.append("n_clamped")
            n_cur, m_cur = n_next, mu
            trace.append(m_cur)
            continue
        # M x (M+1) with full row rank: the last right singular vector spans the null space
        q = res.vh[-1].conj()
        break

    trim_log = []
    if m_cur == 0:
        q = np.array([1.0 + 0j])
        p = pade_numerator(c, q, n_cur)
        lam = _trailing_small(p, tol)
        if lam:
            trim_log.append(("step7", lam))
            p = p[: p.size - lam]
        return DegreeEstimate(p.size - 1, 0, p, q, tau, len(trace) - 1, trim_log,
                              trace, svd_count, tol, tuple(flags))

    p = pade_numerator(c, q, n_cur)

    lam = min(_leading_small(q, tol), n_cur)
    if lam:
        trim_log.append(("step5", lam))
        q = q[lam:]
        p = p[lam:]
        m_cur -= lam
        n_cur -= lam
        check = pade_numerator(c, q, n_cur)
        if np.linalg.norm(check - p) > 10 * tau:
            flags.append("step5_relation")
            warnings.warn("convolution relation violated after leading trim", DegeneracyWarning,
                          stacklevel=2)

    lam = _trailing_small(q, tol)
    if lam:
        trim_log.append(("step6", lam))
        q = q[: q.size - lam]
        m_cur -= lam

    lam = _trailing_small(p, tol)
    if lam:
        trim_log.append(("step7", lam))
        p = p[: p.size - lam]
        n_cur -= lam

    q, p = normalize_null_vector(q, p)
    return DegreeEstimate(n_cur, m_cur, p, q, tau, len(trace) - 1, trim_log,
                          trace, svd_count, tol, tuple(flags))
