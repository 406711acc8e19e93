"""Singularity tracking for a Burgers-type equation with a Hilbert transform.

The periodic solution

    v(x, t) = eta + nu (1 - q^2) / (1 + q^2 - 2 q cos x),   q = beta e^{eta t},

has a conjugate pair of poles at ``x = +-i (eta t + ln beta)`` that reach the
real axis at ``t = -ln(beta) / eta``.  Its Fourier coefficients evolve by

    a_k' = -nu k^2 a_k + k sum_{j + l = k} sign(j) a_j a_l,

and a network fitted in the variable ``w = e^{ix}`` recovers the poles from
its hidden layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import laurent, numkit
from .activation import INFINITY
from .errors import NumericalError, ValidationError
from .pipeline import FitConfig, GridTable, Model, fit_from_coefficients

__all__ = [
    "PdeConfig",
    "SpectralState",
    "SingularityTrack",
    "PDE_FIT_DEFAULTS",
    "exact_solution",
    "exact_state",
    "init_spectral",
    "ode_rhs",
    "step_ode",
    "integrate",
    "fit_at_time",
    "track_singularities",
    "trajectory_report",
    "exponential_grid",
    "parse_times",
]

BLOWUP_LIMIT = 1e12

PDE_FIT_DEFAULTS = dict(n1_plus=10, m1_plus=10, n1_minus=10, m1_minus=10, tol=1e-3,
                        z0=-1.2, phi="cos", rho=1.0)


def parse_times(text):
    """``"lo:step:hi"`` or a comma list to a sorted tuple of floats."""
    s = str(text).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ValidationError(f"time range must be lo:step:hi, got {text!r}")
        lo, step, hi = (float(p) for p in parts)
        if step <= 0:
            raise ValidationError("time step must be positive")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return tuple(round(lo + i * step, 12) for i in range(count))
    return tuple(sorted(float(p) for p in s.split(",") if p.strip()))


@dataclass(frozen=True)
class PdeConfig:
    eta: float = 1.0
    nu: float = 0.1
    beta: float = math.exp(-0.25)
    n: int = 40
    dt: float = 1e-3
    times: tuple = tuple(round(0.1 * i, 12) for i in range(11))

    def __post_init__(self):
        if not (self.eta > 0 and self.nu > 0 and self.beta >= 0):
            raise ValidationError("eta and nu must be positive and beta nonnegative")
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        times = tuple(float(t) for t in self.times)
        if list(times) != sorted(times) or any(t < 0 or t > 1 for t in times):
            raise ValidationError("times must be sorted and lie in [0, 1]")
        object.__setattr__(self, "times", times)

    @property
    def blowup_time(self):
        """``-ln(beta) / eta``; infinite when ``beta = 0``."""
        return math.inf if self.beta == 0 else -math.log(self.beta) / self.eta

    def q(self, t):
        return self.beta * math.exp(self.eta * t)

    def truth(self, t):
        """Pole pair ``(z1, z2)`` with ``z1 = i(eta t + ln beta)``."""
        s = self.eta * t + math.log(self.beta)
        return complex(0, s), complex(0, -s)


@dataclass(frozen=True)
class SpectralState:
    """Fourier coefficients ``a[k + n] = a_k`` at time ``t``."""

    t: float
    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128)
        if a.ndim != 1 or a.size % 2 == 0:
            raise ValidationError("coefficient vector must have odd length 2n + 1")
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return (self.a.size - 1) // 2

    def coeff(self, k):
        return self.a[k + self.n] if abs(k) <= self.n else 0j

    @property
    def reality_defect(self):
        return float(np.max(np.abs(self.a[::-1] - np.conj(self.a))))

    def as_window(self):
        return laurent.LaurentWindow(self.n, 1.0, self.a)


def exact_solution(cfg, x, t):
    """Closed-form solution; complex ``x`` gives its analytic extension."""
    x = np.asarray(x, dtype=np.complex128)
    q = cfg.q(t)
    den = 1 + q * q - 2 * q * np.cos(x)
    bad = np.abs(den) <= 1e-13
    with np.errstate(divide="ignore", invalid="ignore"):
        out = cfg.eta + cfg.nu * (1 - q * q) / np.where(bad, 1, den)
    out = np.where(bad, INFINITY, out)
    return out[()] if out.ndim == 0 else out


def exact_state(cfg, t):
    """DFT coefficients of the closed form on ``2n`` grid points at time ``t``.

    The Nyquist entry is shared equally between ``k = n`` and ``k = -n``.
    """
    n = cfg.n
    x = 2 * np.pi * np.arange(2 * n) / (2 * n)
    spectrum = numkit.fft(exact_solution(cfg, x, t)) / (2 * n)
    k = np.arange(-n, n + 1)
    a = spectrum[k % (2 * n)].copy()
    a[0] /= 2
    a[-1] /= 2
    return SpectralState(float(t), a)


def init_spectral(cfg):
    return exact_state(cfg, 0.0)


def ode_rhs(a, nu, nonlinear=True):
    """Right-hand side of the truncated coefficient system."""
    n = (a.size - 1) // 2
    k = np.arange(-n, n + 1)
    out = -nu * k * k * a
    if nonlinear:
        # full convolution covers indices -2n..2n; keep |k| <= n
        conv = np.convolve(np.sign(k) * a, a)[n: 3 * n + 1]
        out = out + k * conv
    return out


def step_ode(state, dt, cfg, nonlinear=True):
    """One classical RK4 step."""
    if not dt > 0:
        raise ValidationError("dt must be positive")
    a, nu = state.a, cfg.nu
    k1 = ode_rhs(a, nu, nonlinear)
    k2 = ode_rhs(a + 0.5 * dt * k1, nu, nonlinear)
    k3 = ode_rhs(a + 0.5 * dt * k2, nu, nonlinear)
    k4 = ode_rhs(a + dt * k3, nu, nonlinear)
    out = a + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(out)) or np.max(np.abs(out)) > BLOWUP_LIMIT:
        raise NumericalError(f"spectral blow-up at t = {state.t + dt:.6g}")
    return SpectralState(state.t + dt, out)


def integrate(cfg, times=None, nonlinear=True, state=None):
    """States at each requested time, stepping with ``cfg.dt``.

    Returns
    -------
    dict
        ``{t: SpectralState}``; stops early (omitting later times) if the
        solver raises, and stores the error message under ``"error"``.
    """
    times = cfg.times if times is None else tuple(times)
    state = init_spectral(cfg) if state is None else state
    out = {}
    t_start, steps_done = state.t, 0
    for t in times:
        target = int(round((t - t_start) / cfg.dt))
        try:
            while steps_done < target:
                state = step_ode(state, cfg.dt, cfg, nonlinear)
                steps_done += 1
        except NumericalError as exc:
            out["error"] = str(exc)
            break
        out[t] = replace(state, t=float(t))
    return out


def fit_at_time(state, cfg_fit=None):
    """Fit a network to the coefficients of ``state`` in ``w = e^{ix}``."""
    if cfg_fit is None:
        cfg_fit = FitConfig(**PDE_FIT_DEFAULTS)
    window = state.as_window()
    c_plus, c_minus = laurent.split_windows(window, cfg_fit.n1_plus, cfg_fit.m1_plus,
                                            cfg_fit.n1_minus, cfg_fit.m1_minus)
    n_fit = cfg_fit.n_fit if cfg_fit.n_fit is not None else 2 * state.n
    return fit_from_coefficients(c_plus, c_minus, cfg_fit, n_fit)


@dataclass(frozen=True)
class SingularityTrack:
    """Pole estimates in the ``x`` variable with errors against the truth."""

    time: float
    estimates: list
    truth: list
    errors: list
    flags: list = field(default_factory=list)


def _wrap_real(s):
    re = (s.real + np.pi) % (2 * np.pi) - np.pi
    if re == -np.pi:
        re = np.pi
    return complex(re, s.imag)


def track_singularities(model, t, cfg):
    """``s = -i log(ratio)`` per neuron, ``ratio = (b + z0)/w`` or its inverse."""
    truth = list(cfg.truth(t))
    estimates, errors, flags = [], [], []
    for comp in model.components:
        z0 = comp.activation.pole
        for ell, (w, b) in enumerate(zip(comp.w1, comp.b1)):
            shifted = b + z0
            ratio = shifted / w if comp.sign == "+" else w / shifted
            s = _wrap_real(-1j * np.log(complex(ratio)))
            ok = s.imag < 0 if comp.sign == "+" else s.imag > 0
            estimates.append((comp.sign, s))
            errors.append(min(abs(s - z) for z in truth))
            tags = []
            if not ok:
                tags.append("branch")
            if abs(t - cfg.blowup_time) < cfg.dt:
                tags.append("near_blowup")
            flags.append(tuple(tags))
    return SingularityTrack(float(t), estimates, truth, errors, flags)


def trajectory_report(cfg, cfg_fit=None, times=None, source="exact"):
    """Fit, track and tabulate hidden parameters at each time.

    Parameters
    ----------
    source : {"exact", "ode"}
        Coefficients from the DFT of the closed form, or from the RK4 run.

    Returns
    -------
    dict
        ``rows`` (one per time), ``blowup_time`` and summary ``checks``.
    """
    if source not in ("exact", "ode"):
        raise ValidationError("source must be 'exact' or 'ode'")
    cfg_fit = cfg_fit or FitConfig(**PDE_FIT_DEFAULTS)
    times = cfg.times if times is None else tuple(float(t) for t in times)
    states = ({t: exact_state(cfg, t) for t in times} if source == "exact"
              else integrate(cfg, times))
    rows = []
    for t in times:
        row = {"t": t}
        if t not in states:
            row["error"] = states.get("error", "no state")
            rows.append(row)
            continue
        try:
            model = fit_at_time(states[t], cfg_fit)
        except NumericalError as exc:
            row["error"] = str(exc)
            rows.append(row)
            continue
        track = track_singularities(model, t, cfg)
        row.update(model=model, track=track, state=states[t])
        for comp in model.components:
            key = "plus" if comp.sign == "+" else "minus"
            row[f"w_{key}"] = comp.w1.copy()
            row[f"b_{key}"] = comp.b1.copy()
            row[f"C0_{key}"] = comp.factors.c0.copy()
            row[f"NM_{key}"] = (comp.degrees.n_deg, comp.degrees.m_deg)
        rows.append(row)
    return {"rows": rows, "blowup_time": cfg.blowup_time, "source": source,
            "checks": _symmetry_checks(rows)}


def _symmetry_checks(rows):
    """Whether plus and minus hidden parameters coincide and are real."""
    same, real = True, True
    for r in rows:
        if "w_plus" not in r or "w_minus" not in r:
            continue
        for kind in ("w", "b"):
            p, m = r[f"{kind}_plus"], r[f"{kind}_minus"]
            if p.shape != m.shape or np.max(np.abs(p - m)) > 1e-10:
                same = False
            if np.max(np.abs(np.concatenate([p.imag, m.imag]))) > 1e-10:
                real = False
    return {"plus_equals_minus": same, "real": real}


def exponential_grid(model, re_range=(-np.pi, np.pi, 101), im_range=(-1.0, 1.0, 81)):
    """``Phi(e^{iz})`` on a rectangle of the ``z`` plane."""
    xs = np.linspace(*re_range[:2], int(re_range[2]))
    ys = np.linspace(*im_range[:2], int(im_range[2]))
    re, im = np.meshgrid(xs, ys, indexing="xy")
    w = np.exp(1j * (re + 1j * im))
    with np.errstate(all="ignore"):
        vals = np.asarray(model(w.ravel())).reshape(re.shape)
    return GridTable(re, im, vals)
