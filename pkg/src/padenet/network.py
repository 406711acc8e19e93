"""Network components built in closed form from a Padé pair and an activation.

A component is ``Phi(z) = sum_l w2_l r(w1_l z - b1_l) - b2`` (the inner
component uses ``1/z``).  Writing ``q(z) = prod_l (C_l0 + C_l1 z)``, the hidden
layer maps the activation's pole onto the root of factor ``l``; the output
layer is the least-squares solution of ``sum_l w2_l F_l - b2 q = p`` on the
unit circle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from . import numkit
from .activation import INFINITY, Activation, eval_activation
from .errors import NumericalError, RepresentationWarning, ValidationError
from .pade import DegreeEstimate

__all__ = [
    "DEFAULT_RECT",
    "DEFAULT_CLUSTER_RADIUS",
    "REPRESENTATION_RTOL",
    "FactorSet",
    "NetworkComponent",
    "PoleEstimate",
    "factor_denominator",
    "hidden_params",
    "output_coefficients",
    "output_params",
    "build_component",
    "eval_component",
    "eval_network",
    "recover_poles",
    "cluster_poles",
    "sort_roots",
]

DEFAULT_RECT = (-1.0, -0.5, 0.5, 1.0)
DEFAULT_CLUSTER_RADIUS = 1e-6
REPRESENTATION_RTOL = 1e-6


def _check_sign(sign):
    if sign not in ("+", "-"):
        raise ValidationError(f"sign must be '+' or '-', got {sign!r}")


def _check_rect(rect):
    a, b, c, d = (float(x) for x in rect)
    if not (a < b and c < d):
        raise ValidationError(f"rectangle needs a < b and c < d, got {rect}")
    return a, b, c, d


def sort_roots(roots):
    """Order by magnitude then phase, rounded so ties are stable."""
    roots = np.asarray(roots, dtype=np.complex128)
    keys = [(float(f"{abs(r):.12g}"), float(f"{np.angle(r):.12g}")) for r in roots]
    order = sorted(range(roots.size), key=lambda i: keys[i])
    return roots[order]


@dataclass(frozen=True)
class FactorSet:
    """Linear factors ``C_k0 + C_k1 z`` whose product is ``q``."""

    c0: np.ndarray
    c1: np.ndarray
    rect: tuple
    seed: int
    roots: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        c0 = numkit.as_complex_vector(self.c0, "c0")
        c1 = numkit.as_complex_vector(self.c1, "c1")
        if c0.size != c1.size:
            raise ValidationError("c0 and c1 must have equal length")
        if np.any(c1 == 0):
            raise ValidationError("every C_k1 must be nonzero")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "rect", tuple(float(x) for x in self.rect))
        if self.roots is None:
            object.__setattr__(self, "roots", -c0 / c1)

    @property
    def size(self):
        return self.c0.size

    def expand(self):
        """Coefficients of ``prod_k (C_k0 + C_k1 z)``, constant first."""
        out = np.array([1.0 + 0j])
        for a, b in zip(self.c0, self.c1):
            out = numkit.polymul(out, [a, b])
        return out


def factor_denominator(q, rect=DEFAULT_RECT, seed=0):
    """Split ``q`` into ``M`` linear factors with random constant terms.

    ``C_k0`` for ``k < M`` are uniform on ``[a, b] + i[c, d]``; ``C_M0``
    makes ``prod C_k0 = q_0``; ``C_k1 = -C_k0 / zeta_k`` places each factor's
    root on a root of ``q``.
    """
    q = numkit.as_complex_vector(q, "q")
    m = q.size - 1
    if m < 1:
        raise ValidationError("q must have degree >= 1")
    if q[0] == 0 or q[-1] == 0:
        raise ValidationError("q must have nonzero first and last coefficients; trim first")
    a, b, c, d = _check_rect(rect)
    zeta = sort_roots(numkit.polynomial_roots(q))
    if np.any(np.abs(zeta) <= 1e-13):
        raise NumericalError("q has a root at the origin")
    rng = np.random.default_rng(seed)
    c0 = np.empty(m, dtype=np.complex128)
    for k in range(m - 1):
        draw = 0j
        while draw == 0:
            draw = complex(rng.uniform(a, b), rng.uniform(c, d))
        c0[k] = draw
    c0[m - 1] = q[0] / np.prod(c0[: m - 1])
    c1 = -c0 / zeta
    return FactorSet(c0, c1, (a, b, c, d), int(seed), zeta)


def hidden_params(f, a):
    """``w_k = C_k1 / gamma1`` and ``b_k = (gamma0 - C_k0) / gamma1``."""
    if a.gamma1 == 0:
        raise ValidationError("activation has no pole; unsafe-PAU construction requires one")
    w1 = f.c1 / a.gamma1
    b1 = (a.gamma0 - f.c0) / a.gamma1
    return w1, b1


@dataclass(frozen=True)
class PoleEstimate:
    location: complex
    neuron_index: int
    component_sign: str
    flags: tuple = ()


@dataclass(frozen=True)
class NetworkComponent:
    """One of the two components of the network.

    ``ls_residual`` is the absolute least-squares residual and ``p_norm``
    the norm of the right-hand side, so the relative residual is their ratio.
    """

    sign: str
    activation: Activation
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: complex
    degrees: DegreeEstimate
    factors: FactorSet
    ls_residual: float = 0.0
    p_norm: float = 1.0
    n_fit: int = 0

    def __post_init__(self):
        _check_sign(self.sign)
        w1 = numkit.as_complex_vector(self.w1, "w1")
        b1 = numkit.as_complex_vector(self.b1, "b1")
        if w1.size != b1.size:
            raise ValidationError("w1 and b1 must have the same length")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "b1", b1)
        if self.w2 is not None:
            w2 = numkit.as_complex_vector(self.w2, "w2")
            if w2.size != w1.size:
                raise ValidationError("w2 must have one entry per neuron")
            object.__setattr__(self, "w2", w2)
            object.__setattr__(self, "b2", complex(self.b2))

    @property
    def n_neurons(self):
        return self.w1.size

    @property
    def relative_residual(self):
        return self.ls_residual / self.p_norm if self.p_norm > 0 else self.ls_residual

    @property
    def p(self):
        return self.degrees.p

    @property
    def q(self):
        return self.degrees.q

    def pade_value(self, z):
        """``p(x) / q(x)`` with ``x = z`` (outer) or ``1/z`` (inner)."""
        x = _argument(self.sign, z)
        return numkit.polyval(self.p, x) / numkit.polyval(self.q, x)

    def __call__(self, z):
        return eval_component(self, z)


def output_coefficients(alpha, w, b):
    """``A_k = sum_{j >= k} alpha_j binom(j, k) (-b)^(j-k) w^k``.

    These are the coefficients of ``alpha(w z - b)``.
    """
    alpha = np.asarray(alpha, dtype=np.complex128)
    d = alpha.size - 1
    out = np.zeros(d + 1, dtype=np.complex128)
    for k in range(d + 1):
        for j in range(k, d + 1):
            out[k] += alpha[j] * comb(j, k) * (-b) ** (j - k) * w ** k
    return out


def _fit_columns(comp, x):
    """Values of ``F_l`` at ``x`` for every neuron, shape ``(len(x), M)``."""
    fs = comp.factors
    factor_vals = fs.c0[None, :] + fs.c1[None, :] * x[:, None]
    m = fs.size
    cols = np.empty((x.size, m), dtype=np.complex128)
    for ell in range(m):
        others = np.prod(np.delete(factor_vals, ell, axis=1), axis=1)
        a_ell = output_coefficients(comp.activation.alpha, comp.w1[ell], comp.b1[ell])
        cols[:, ell] = numkit.polyval(a_ell, x) * others
    return cols


def output_params(comp, n_fit_points):
    """Least-squares output weights and bias.

    Parameters
    ----------
    comp : NetworkComponent
        Hidden parameters set; ``w2`` may be ``None``.
    n_fit_points : int
        Number of unit-circle nodes ``exp(2 pi i m / n_fit_points)``.

    Returns
    -------
    w2 : ndarray
    b2 : complex
    residual : float
        Absolute residual of the least-squares system.
    p_norm : float
        Norm of the right-hand side.
    """
    m = comp.n_neurons
    if n_fit_points < m + 1:
        raise ValidationError(f"need at least M + 1 = {m + 1} fit points, got {n_fit_points}")
    z = np.exp(2j * np.pi * np.arange(n_fit_points) / n_fit_points)
    x = z if comp.sign == "+" else 1.0 / z
    mat = np.hstack([_fit_columns(comp, x), -numkit.polyval(comp.q, x)[:, None]])
    rhs = numkit.polyval(comp.p, x)
    sol, residual, rank_deficient = numkit.least_squares(mat, rhs)
    p_norm = float(np.linalg.norm(rhs))
    if residual > REPRESENTATION_RTOL * p_norm:
        warnings.warn(
            f"output layer ({comp.sign}) not solved exactly: relative residual "
            f"{residual / p_norm if p_norm else residual:.3e}",
            RepresentationWarning, stacklevel=2)
    return sol[:m], complex(sol[m]), residual, p_norm


def build_component(degrees, activation, sign, rect=DEFAULT_RECT, seed=0, n_fit_points=None):
    """Factor ``q``, set the hidden layer and solve the output layer."""
    _check_sign(sign)
    if degrees.m_deg < 1:
        raise ValidationError("a component needs m_deg >= 1")
    factors = factor_denominator(degrees.q, rect, seed)
    w1, b1 = hidden_params(factors, activation)
    if n_fit_points is None:
        n_fit_points = max(2 * (degrees.n_deg + degrees.m_deg + 1), 64)
    comp = NetworkComponent(sign, activation, w1, b1, None, 0j, degrees, factors, n_fit=n_fit_points)
    w2, b2, res, p_norm = output_params(comp, n_fit_points)
    return replace(comp, w2=w2, b2=b2, ls_residual=res, p_norm=p_norm)


def _argument(sign, z):
    z = np.asarray(z, dtype=np.complex128)
    if sign == "+":
        return z
    if np.any(z == 0):
        raise ValidationError("inner component is undefined at z = 0")
    return 1.0 / z


def eval_component(comp, z):
    """``sum_l w2_l r(w1_l x - b1_l) - b2`` with ``x = z`` or ``1/z``."""
    x = _argument(comp.sign, z)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    vals = eval_activation(comp.activation, comp.w1[None, :] * x[:, None] - comp.b1[None, :])
    vals = np.atleast_2d(vals)
    hit = np.any(np.isinf(vals), axis=1)
    with np.errstate(invalid="ignore"):
        out = vals @ comp.w2 - comp.b2
    out = np.where(hit, INFINITY, out)
    return out[0] if scalar else out


def eval_network(plus=None, minus=None, z=0j, remainder_plus=None, remainder_minus=None):
    """Sum of the present components plus any analytic-side polynomial.

    ``remainder_plus`` / ``remainder_minus`` hold the Taylor part of a side
    with no poles; they are evaluated in ``z`` and ``1/z`` respectively.
    """
    if plus is None and minus is None:
        raise ValidationError("network needs at least one component")
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    if plus is not None:
        out = out + eval_component(plus, z)
    if minus is not None:
        out = out + eval_component(minus, z)
    if remainder_plus is not None and len(remainder_plus):
        out = out + numkit.polyval(remainder_plus, z)
    if remainder_minus is not None and len(remainder_minus) == 1:
        out = out + remainder_minus[0]
    elif remainder_minus is not None and len(remainder_minus):
        out = out + numkit.polyval(remainder_minus, _argument("-", z))
    return out[()] if out.ndim == 0 else out


def recover_poles(comp):
    """One pole estimate per neuron from the hidden weights and biases."""
    z0 = comp.activation.pole
    out = []
    for ell, (w, b) in enumerate(zip(comp.w1, comp.b1)):
        shifted = b + z0
        if comp.sign == "+":
            out.append(PoleEstimate(complex(shifted / w), ell, "+"))
        elif abs(shifted) <= 1e-13:
            out.append(PoleEstimate(INFINITY, ell, "-", ("at_infinity",)))
        else:
            out.append(PoleEstimate(complex(w / shifted), ell, "-"))
    return out


def cluster_poles(estimates, radius=DEFAULT_CLUSTER_RADIUS):
    """Single-linkage groups of estimates closer than ``radius``.

    Returns
    -------
    list of (complex, int)
        Centroid and multiplicity per group, ordered by magnitude then phase.
    """
    if not radius > 0:
        raise ValidationError("radius must be positive")
    locs = [e.location if isinstance(e, PoleEstimate) else complex(e) for e in estimates]
    locs = [z for z in locs if np.isfinite(z)]
    parent = list(range(len(locs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            if abs(locs[i] - locs[j]) <= radius:
                parent[find(i)] = find(j)
    groups = {}
    for i, z in enumerate(locs):
        groups.setdefault(find(i), []).append(z)
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    out.sort(key=lambda t: (abs(t[0]), np.angle(t[0])))
    return out
