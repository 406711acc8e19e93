"""End-to-end fitting, persistence and grid evaluation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import laurent, numkit
from .activation import INFINITY, Activation, build_activation, make_seed
from .errors import NumericalError, SchemaError, ValidationError
from .network import (
    DEFAULT_CLUSTER_RADIUS,
    DEFAULT_RECT,
    FactorSet,
    NetworkComponent,
    PoleEstimate,
    build_component,
    cluster_poles,
    eval_network,
    recover_poles,
)
from .pade import DEFAULT_TOL, DegreeEstimate, estimate_degrees

__all__ = [
    "FitConfig",
    "Model",
    "GridTable",
    "fit",
    "fit_from_coefficients",
    "save_model",
    "load_model",
    "model_to_dict",
    "model_from_dict",
    "eval_grid",
    "parse_complex",
    "format_complex",
]

FORMAT_VERSION = 1


def parse_complex(text):
    """Parse ``"RE+IMi"``, ``"RE-IMi"``, ``"RE"`` or ``"IMi"`` (whitespace allowed)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if not s:
        raise ValidationError("empty complex literal")
    s = s.replace("i", "j").replace("J", "j").replace("I", "j")
    try:
        return complex(s)
    except ValueError:
        raise ValidationError(f"cannot parse complex literal {text!r}") from None


def format_complex(z):
    z = complex(z)
    return f"{z.real!r}{'+' if z.imag >= 0 or math.isnan(z.imag) else '-'}{abs(z.imag)!r}i"


@dataclass(frozen=True)
class FitConfig:
    """Inputs of :func:`fit`.

    ``n = None`` takes ``n`` from the samples.  ``n_activation`` and
    ``n_fit`` are per-stage overrides; ``n_fit = None`` fits on the ``2n``
    roots of unity.
    """

    n: int | None = None
    rho: float = laurent.DEFAULT_RHO
    n1_plus: int = 10
    m1_plus: int = 10
    n1_minus: int = 10
    m1_minus: int = 10
    tol: float = DEFAULT_TOL
    rect: tuple = DEFAULT_RECT
    seed: int = 0
    phi: str = "cos"
    z0: complex = -1.2
    shared_activation: bool = True
    n_activation: int = 64
    n_fit: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "z0", parse_complex(self.z0))
        object.__setattr__(self, "rect", tuple(float(x) for x in self.rect))
        for name in ("n1_plus", "m1_plus", "n1_minus", "m1_minus"):
            if int(getattr(self, name)) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if not self.tol > 0:
            raise ValidationError("tol must be positive")
        if not self.rho > 0:
            raise ValidationError("rho must be positive")
        a, b, c, d = self.rect
        if not (a < b and c < d):
            raise ValidationError(f"rectangle needs a < b and c < d, got {self.rect}")
        if self.n is not None and self.n < self.required_n:
            raise ValidationError(f"n = {self.n} too small; need n >= {self.required_n}")

    @property
    def required_n(self):
        return max(self.n1_plus + self.m1_plus, self.n1_minus + self.m1_minus)

    def to_dict(self):
        d = asdict(self)
        d["z0"] = [self.z0.real, self.z0.imag]
        d["rect"] = list(self.rect)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "z0" in d:
            d["z0"] = _complex_from_json(d["z0"], "meta.config.z0")
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass(frozen=True)
class Model:
    """Fitted network: up to two components plus analytic remainders."""

    plus: NetworkComponent | None
    minus: NetworkComponent | None
    config: FitConfig
    pole_report: list = field(default_factory=list)
    remainder_plus: np.ndarray | None = None
    remainder_minus: np.ndarray | None = None
    degrees_plus: DegreeEstimate | None = None
    degrees_minus: DegreeEstimate | None = None

    def __post_init__(self):
        if self.plus is None and self.minus is None:
            raise ValidationError("model needs at least one component")

    def __call__(self, z):
        return eval_network(self.plus, self.minus, z, self.remainder_plus, self.remainder_minus)

    @property
    def components(self):
        return [c for c in (self.plus, self.minus) if c is not None]

    def clusters(self, radius=DEFAULT_CLUSTER_RADIUS):
        return cluster_poles(self.pole_report, radius)


def fit_from_coefficients(c_plus, c_minus, cfg, n_fit_points):
    """Build a model from one-sided coefficient vectors."""
    dp = estimate_degrees(c_plus, cfg.n1_plus, cfg.m1_plus, cfg.tol)
    dm = estimate_degrees(c_minus, cfg.n1_minus, cfg.m1_minus, cfg.tol)
    if dp.m_deg == 0 and dm.m_deg == 0:
        raise NumericalError("function appears analytic in the sampled annulus; no network to build")
    seed_fn = make_seed(cfg.phi, cfg.z0)
    sides = [(d, s) for d, s in ((dp, "+"), (dm, "-")) if d.m_deg > 0]

    def degree_for(d):
        return max(d.n_deg + 1 - d.m_deg, 0)

    acts = {}
    if cfg.shared_activation:
        act = build_activation(seed_fn, max(degree_for(d) for d, _ in sides), cfg.n_activation)
        acts = {s: act for _, s in sides}
    else:
        acts = {s: build_activation(seed_fn, degree_for(d), cfg.n_activation) for d, s in sides}

    comps = {"+": None, "-": None}
    for d, s in sides:
        stream = cfg.seed if s == "+" else cfg.seed + 1
        comps[s] = build_component(d, acts[s], s, cfg.rect, stream, n_fit_points)
    report = []
    for s in ("+", "-"):
        if comps[s] is not None:
            report.extend(recover_poles(comps[s]))
    return Model(
        comps["+"], comps["-"], cfg, report,
        remainder_plus=dp.p if dp.m_deg == 0 else None,
        remainder_minus=dm.p if dm.m_deg == 0 else None,
        degrees_plus=dp, degrees_minus=dm,
    )


def fit(samples, cfg):
    """Samples on ``|z| = rho`` to a fitted :class:`Model`."""
    if not isinstance(samples, laurent.ContourSamples):
        raise ValidationError("samples must be ContourSamples")
    if cfg.n is not None and cfg.n != samples.n:
        raise ValidationError(f"config n = {cfg.n} but samples give n = {samples.n}")
    if not np.isclose(samples.rho, cfg.rho, rtol=1e-15, atol=0):
        raise ValidationError(f"config rho = {cfg.rho} but samples use rho = {samples.rho}")
    window = laurent.compute_coefficients(samples)
    c_plus, c_minus = laurent.split_windows(window, cfg.n1_plus, cfg.m1_plus,
                                            cfg.n1_minus, cfg.m1_minus)
    n_fit = cfg.n_fit if cfg.n_fit is not None else 2 * samples.n
    return fit_from_coefficients(c_plus, c_minus, cfg, n_fit)


# ---------------------------------------------------------------- persistence

def _cjson(z):
    z = complex(z)
    return [z.real, z.imag]


def _vjson(v):
    return [_cjson(z) for z in np.asarray(v).ravel()]


def _complex_from_json(obj, path):
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)):
        raise SchemaError(path, "expected a [re, im] pair of numbers")
    return complex(float(obj[0]), float(obj[1]))


def _vector_from_json(obj, path, length=None):
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of [re, im] pairs")
    out = np.array([_complex_from_json(x, f"{path}[{i}]") for i, x in enumerate(obj)],
                   dtype=np.complex128)
    if length is not None and out.size != length:
        raise SchemaError(path, f"expected {length} entries, got {out.size}")
    return out


def _component_to_dict(c):
    d = c.degrees
    return {
        "sign": c.sign,
        "N": d.n_deg,
        "M": d.m_deg,
        "alpha": _vjson(c.activation.alpha),
        "gamma": _vjson(c.activation.gamma),
        "w1": _vjson(c.w1),
        "b1": _vjson(c.b1),
        "w2": _vjson(c.w2),
        "b2": _cjson(c.b2),
        "p": _vjson(d.p),
        "q": _vjson(d.q),
        "C0": _vjson(c.factors.c0),
        "C1": _vjson(c.factors.c1),
        "ls_residual": c.ls_residual,
        "p_norm": c.p_norm,
        "n_fit": c.n_fit,
        "seed": c.factors.seed,
        "rect": list(c.factors.rect),
        "tau": d.tau,
        "tol": d.tol,
        "svd_iterations": d.svd_iterations,
        "svd_count": d.svd_count,
        "m_trace": list(d.m_trace),
        "trim_log": [list(t) for t in d.trim_log],
        "flags": list(d.flags),
    }


def _degree_to_dict(d):
    return {"N": d.n_deg, "M": d.m_deg, "p": _vjson(d.p), "q": _vjson(d.q), "tau": d.tau,
            "tol": d.tol, "svd_iterations": d.svd_iterations, "svd_count": d.svd_count,
            "m_trace": list(d.m_trace), "trim_log": [list(t) for t in d.trim_log],
            "flags": list(d.flags)}


def model_to_dict(m):
    return {
        "format": FORMAT_VERSION,
        "plus": _component_to_dict(m.plus) if m.plus is not None else None,
        "minus": _component_to_dict(m.minus) if m.minus is not None else None,
        "meta": {
            "config": m.config.to_dict(),
            "remainder_plus": _vjson(m.remainder_plus) if m.remainder_plus is not None else None,
            "remainder_minus": _vjson(m.remainder_minus) if m.remainder_minus is not None else None,
            "degrees_plus": _degree_to_dict(m.degrees_plus) if m.degrees_plus is not None else None,
            "degrees_minus": _degree_to_dict(m.degrees_minus) if m.degrees_minus is not None else None,
        },
    }


def _get(d, key, path, kind):
    if key not in d:
        raise SchemaError(f"{path}.{key}", "missing field")
    v = d[key]
    if kind is int and (not isinstance(v, int) or isinstance(v, bool)):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    if kind is float and (not isinstance(v, (int, float)) or isinstance(v, bool)):
        raise SchemaError(f"{path}.{key}", "expected a number")
    return v


def _degree_from_dict(d, path):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object")
    n, m = _get(d, "N", path, int), _get(d, "M", path, int)
    if n < 0 or m < 0:
        raise SchemaError(path, "degrees must be nonnegative")
    return DegreeEstimate(
        n, m,
        _vector_from_json(_get(d, "p", path, list), f"{path}.p", n + 1),
        _vector_from_json(_get(d, "q", path, list), f"{path}.q", m + 1),
        float(d.get("tau", 0.0)), int(d.get("svd_iterations", 0)),
        [tuple(t) for t in d.get("trim_log", [])], list(d.get("m_trace", [])),
        int(d.get("svd_count", 0)), float(d.get("tol", DEFAULT_TOL)), tuple(d.get("flags", [])),
    )


def _component_from_dict(d, path):
    if not isinstance(d, dict):
        raise SchemaError(path, "expected an object or null")
    sign = _get(d, "sign", path, str)
    if sign not in ("+", "-"):
        raise SchemaError(f"{path}.sign", "expected '+' or '-'")
    degrees = _degree_from_dict(d, path)
    m = degrees.m_deg
    if m < 1:
        raise SchemaError(f"{path}.M", "a component needs M >= 1")
    gamma = _vector_from_json(_get(d, "gamma", path, list), f"{path}.gamma", 2)
    alpha = _vector_from_json(_get(d, "alpha", path, list), f"{path}.alpha")
    if alpha.size == 0:
        raise SchemaError(f"{path}.alpha", "expected at least one entry")
    if gamma[1] == 0:
        raise SchemaError(f"{path}.gamma", "gamma1 must be nonzero")
    act = Activation(alpha, gamma[0], gamma[1])
    vec = {k: _vector_from_json(_get(d, k, path, list), f"{path}.{k}", m)
           for k in ("w1", "b1", "w2", "C0", "C1")}
    if np.any(vec["C1"] == 0):
        raise SchemaError(f"{path}.C1", "entries must be nonzero")
    rect = d.get("rect", list(DEFAULT_RECT))
    factors = FactorSet(vec["C0"], vec["C1"], tuple(rect), _get(d, "seed", path, int))
    comp = NetworkComponent(
        sign, act, vec["w1"], vec["b1"], vec["w2"],
        _complex_from_json(_get(d, "b2", path, list), f"{path}.b2"),
        degrees, factors, float(_get(d, "ls_residual", path, float)),
        float(d.get("p_norm", 1.0)), int(d.get("n_fit", 0)),
    )
    _revalidate(comp, path)
    return comp


def _revalidate(comp, path):
    """Check the structural identities tying the stored fields together."""
    a, f = comp.activation, comp.factors
    scale = max(1.0, float(np.max(np.abs(f.c1))) / abs(a.gamma1))
    if np.max(np.abs(comp.w1 - f.c1 / a.gamma1)) > 1e-10 * scale:
        raise SchemaError(f"{path}.w1", "inconsistent with C1 and gamma")
    scale = max(1.0, float(np.max(np.abs(a.gamma0 - f.c0))) / abs(a.gamma1))
    if np.max(np.abs(comp.b1 - (a.gamma0 - f.c0) / a.gamma1)) > 1e-10 * scale:
        raise SchemaError(f"{path}.b1", "inconsistent with C0 and gamma")
    prod = f.expand()
    q = comp.degrees.q
    if np.linalg.norm(prod - q) > 1e-8 * max(np.linalg.norm(q), 1e-300):
        raise SchemaError(f"{path}.q", "product of linear factors does not reproduce q")


def model_from_dict(obj):
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a JSON object")
    plus = _component_from_dict(obj["plus"], "plus") if obj.get("plus") is not None else None
    minus = _component_from_dict(obj["minus"], "minus") if obj.get("minus") is not None else None
    if plus is None and minus is None:
        raise SchemaError("plus", "model needs at least one component")
    meta = obj.get("meta") or {}
    if not isinstance(meta, dict):
        raise SchemaError("meta", "expected an object")
    cfg = FitConfig.from_dict(meta.get("config") or {})
    rem = {}
    for key in ("remainder_plus", "remainder_minus"):
        rem[key] = (_vector_from_json(meta[key], f"meta.{key}") if meta.get(key) is not None else None)
    degs = {}
    for key in ("degrees_plus", "degrees_minus"):
        degs[key] = _degree_from_dict(meta[key], f"meta.{key}") if meta.get(key) is not None else None
    report = []
    for comp in (plus, minus):
        if comp is not None:
            report.extend(recover_poles(comp))
    return Model(plus, minus, cfg, report, rem["remainder_plus"], rem["remainder_minus"],
                 degs["degrees_plus"], degs["degrees_minus"])


def save_model(m, path):
    """Write ``m`` as JSON; floats use shortest round-trip ``repr``."""
    text = json.dumps(model_to_dict(m), indent=1, allow_nan=False)
    Path(path).write_text(text + "\n")


def load_model(path):
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON: {exc}") from None
    return model_from_dict(obj)


# ---------------------------------------------------------------- grids

@dataclass(frozen=True)
class GridTable:
    re: np.ndarray
    im: np.ndarray
    values: np.ndarray

    def rows(self):
        for x, y, v in zip(self.re.ravel(), self.im.ravel(), self.values.ravel()):
            if np.isinf(v):
                yield x, y, math.inf, math.nan
            else:
                yield x, y, abs(v), float(np.angle(v))

    def to_csv(self, path=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "abs", "arg"])
        for row in self.rows():
            w.writerow([repr(float(x)) for x in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _axis(bounds):
    lo, hi, n = bounds
    n = int(n)
    if n < 2:
        raise ValidationError("grid resolution must be >= 2 per axis")
    return np.linspace(float(lo), float(hi), n)


def eval_grid(m, re_range, im_range):
    """Evaluate ``m`` on a rectangular grid.

    ``re_range`` and ``im_range`` are ``(lo, hi, count)``.  Points within
    1e-12 of a recovered pole (or at ``z = 0`` when the inner part depends on
    ``1/z``) get the infinity marker.
    """
    xs, ys = _axis(re_range), _axis(im_range)
    re, im = np.meshgrid(xs, ys, indexing="xy")
    z = (re + 1j * im).ravel()
    poles = np.array([e.location for e in m.pole_report if np.isfinite(e.location)])
    bad = np.zeros(z.size, dtype=bool)
    if poles.size:
        bad |= np.min(np.abs(z[:, None] - poles[None, :]), axis=1) <= 1e-12
    if m.minus is not None or (m.remainder_minus is not None and len(m.remainder_minus) > 1):
        bad |= z == 0
    vals = np.full(z.size, INFINITY, dtype=np.complex128)
    ok = ~bad
    if np.any(ok):
        with np.errstate(all="ignore"):
            vals[ok] = m(z[ok])
    return GridTable(re, im, vals.reshape(re.shape))
