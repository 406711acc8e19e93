"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import laurent
from .errors import NumericalError, RepresentationWarning, ValidationError
from .network import DEFAULT_CLUSTER_RADIUS, DEFAULT_RECT, cluster_poles
from .pipeline import (
    FitConfig,
    eval_grid,
    fit,
    format_complex,
    load_model,
    model_to_dict,
    parse_complex,
    save_model,
)
from .testfunctions import EXFUN_BOUND, EXFUN_LOCATIONS, EXFUN_N, EXFUN_RHO, GENERATORS, exfun

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

# options whose values may start with '-' but are not plain numbers
_DASH_VALUE_OPTIONS = ("--z0", "--re", "--im", "--rect", "--times")


def _glue_dash_values(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASH_VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _range3(text):
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValidationError(f"expected lo:hi:n, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValidationError(f"expected lo:hi:n, got {text!r}") from None


def _rect(text):
    try:
        vals = tuple(float(x) for x in str(text).split(","))
    except ValueError:
        raise ValidationError(f"expected a,b,c,d, got {text!r}") from None
    if len(vals) != 4:
        raise ValidationError(f"expected a,b,c,d, got {text!r}")
    return vals


def _cpair(z):
    z = complex(z)
    return [z.real, z.imag]


def read_samples(path):
    """Load ``{"rho": r, "values": [[re, im], ...]}``; ``"refined"`` is optional."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read samples {path}: {exc}") from None
    if not isinstance(obj, dict) or "rho" not in obj or "values" not in obj:
        raise ValidationError("samples file needs 'rho' and 'values'")

    def vec(key):
        try:
            arr = np.array(obj[key], dtype=float)
        except (TypeError, ValueError):
            raise ValidationError(f"{key}: expected [[re, im], ...]") from None
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValidationError(f"{key}: expected [[re, im], ...]")
        return arr[:, 0] + 1j * arr[:, 1]

    s = laurent.ContourSamples(float(obj["rho"]), vec("values"))
    refined = laurent.ContourSamples(float(obj["rho"]), vec("refined")) if "refined" in obj else None
    return s, refined


def write_samples(path, rho, values, refined=None):
    obj = {"rho": rho, "values": [_cpair(v) for v in values]}
    if refined is not None:
        obj["refined"] = [_cpair(v) for v in refined]
    Path(path).write_text(json.dumps(obj) + "\n")


# ---------------------------------------------------------------- commands

def cmd_sample(args):
    f = GENERATORS[args.function]
    s = laurent.sample_function(f, args.n, args.rho)
    refined = laurent.sample_function(f, 2 * args.n, args.rho).values if args.refined else None
    write_samples(args.out, args.rho, s.values, refined)
    print(f"wrote {2 * args.n} samples of {args.function} on |z| = {args.rho} to {args.out}")


def cmd_coeffs(args):
    s, refined = read_samples(args.samples)
    w = laurent.compute_coefficients(s)
    out = {"n": w.n, "rho": w.rho,
           "coeffs": [{"k": int(k), "re": c.real, "im": c.imag} for k, c in zip(w.indices, w.coeffs)]}
    if args.check:
        if refined is None:
            raise ValidationError("--check needs a 'refined' array of 4n samples in the samples file")
        est = laurent.estimate_error(s, refined)
        out["error_estimate"] = [float(e) for e in est]
        print(f"max estimated coefficient error: {float(np.max(est)):.3e}")
    Path(args.out).write_text(json.dumps(out) + "\n")
    print(f"wrote {w.coeffs.size} coefficients (n = {w.n}) to {args.out}")


def _fit_config(args, n):
    return FitConfig(
        n=n, rho=args.rho, n1_plus=args.n1, m1_plus=args.m1,
        n1_minus=args.n1 if args.n1_minus is None else args.n1_minus,
        m1_minus=args.m1 if args.m1_minus is None else args.m1_minus,
        tol=args.tol, rect=_rect(args.rect), seed=args.seed, phi=args.phi,
        z0=parse_complex(args.z0),
    )


def _print_degrees(model):
    for side, d in (("+", model.degrees_plus), ("-", model.degrees_minus)):
        if d is None:
            continue
        trace = " -> ".join(str(m) for m in d.m_trace)
        print(f"side {side}: N = {d.n_deg}, M = {d.m_deg}, reductions = {d.svd_iterations}, "
              f"M1 trace {trace}")
    for comp in model.components:
        print(f"side {comp.sign}: relative output residual {comp.relative_residual:.2e}")


def cmd_fit(args):
    s, _ = read_samples(args.samples)
    if not math.isclose(s.rho, args.rho, rel_tol=1e-15):
        raise ValidationError(f"--rho {args.rho} differs from the samples' rho {s.rho}")
    model = fit(s, _fit_config(args, s.n))
    save_model(model, args.out)
    _print_degrees(model)
    print(f"wrote model with {len(model.pole_report)} neurons to {args.out}")


def _pole_rows(model, radius):
    groups = cluster_poles(model.pole_report, radius)
    rows = []
    for e in model.pole_report:
        mult = 1
        if groups and np.isfinite(e.location):
            mult = min(groups, key=lambda g: abs(e.location - g[0]))[1]
        rows.append((e.component_sign, e.neuron_index, e.location.real, e.location.imag, mult))
    return rows


def cmd_poles(args):
    model = load_model(args.model)
    rows = _pole_rows(model, args.cluster_radius)
    print(f"{'sign':>4} {'neuron':>6} {'re':>22} {'im':>22} {'mult':>4}")
    for sign, idx, re, im, mult in rows:
        print(f"{sign:>4} {idx:>6d} {re:>22.15g} {im:>22.15g} {mult:>4d}")


def cmd_eval(args):
    model = load_model(args.model)
    grid = eval_grid(model, _range3(args.re), _range3(args.im))
    grid.to_csv(args.out)
    print(f"wrote {grid.values.size} grid points to {args.out}")


def cmd_demo(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    z0 = EXFUN_LOCATIONS[args.location]
    cfg = FitConfig(n=EXFUN_N, rho=EXFUN_RHO, n1_plus=EXFUN_BOUND, m1_plus=EXFUN_BOUND,
                    n1_minus=EXFUN_BOUND, m1_minus=EXFUN_BOUND, tol=args.tol, seed=args.seed, z0=z0)
    model = fit(laurent.sample_function(exfun, EXFUN_N, EXFUN_RHO), cfg)
    save_model(model, out_dir / "model.json")
    _print_degrees(model)
    clusters = cluster_poles(model.pole_report, args.cluster_radius)
    print(f"{len(model.pole_report)} neurons, {len(clusters)} distinct pole locations "
          f"(radius {args.cluster_radius:g})")
    with open(out_dir / "poles.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sign", "neuron", "re", "im", "multiplicity"])
        for row in _pole_rows(model, args.cluster_radius):
            w.writerow([row[0], row[1], repr(row[2]), repr(row[3]), row[4]])
    eval_grid(model, (-1.5, 1.5, args.resolution), (-1.5, 1.5, args.resolution)).to_csv(
        out_dir / "grid.csv")
    print(f"wrote model.json, poles.csv, grid.csv to {out_dir}")


def cmd_pde(args):
    from .pdelab import PDE_FIT_DEFAULTS, PdeConfig, exponential_grid, parse_times, trajectory_report

    cfg = PdeConfig(eta=args.eta, nu=args.nu, beta=math.exp(args.beta_exp), n=args.n, dt=args.dt,
                    times=parse_times(args.times))
    fit_kw = dict(PDE_FIT_DEFAULTS, tol=args.tol, z0=parse_complex(args.z0), seed=args.seed,
                  n1_plus=args.n1, m1_plus=args.m1, n1_minus=args.n1, m1_minus=args.m1)
    report = trajectory_report(cfg, FitConfig(**fit_kw), source=args.source)
    rows = []
    grid_dir = Path(args.grid_dir) if args.grid_dir else None
    if grid_dir:
        grid_dir.mkdir(parents=True, exist_ok=True)
    print(f"blow-up time {report['blowup_time']:.6g}; coefficients from {report['source']}")
    print(f"{'t':>5} {'w+':>12} {'b+':>12} {'w-':>12} {'b-':>12} {'max err':>10}")
    for r in report["rows"]:
        out = {"t": r["t"]}
        if "error" in r:
            out["error"] = r["error"]
            print(f"{r['t']:5.2f} {r['error']}")
            rows.append(out)
            continue
        tr = r["track"]
        for key in ("plus", "minus"):
            if f"w_{key}" in r:
                out[f"w_{key}"] = [_cpair(v) for v in r[f"w_{key}"]]
                out[f"b_{key}"] = [_cpair(v) for v in r[f"b_{key}"]]
                out[f"NM_{key}"] = list(r[f"NM_{key}"])
        out["estimates"] = [{"sign": s, "s": _cpair(z)} for s, z in tr.estimates]
        out["truth"] = [_cpair(z) for z in tr.truth]
        out["errors"] = list(tr.errors)
        out["flags"] = [list(f) for f in tr.flags]
        out["model"] = model_to_dict(r["model"])
        if args.include_coeffs:
            out["a"] = [_cpair(v) for v in r["state"].a]
        rows.append(out)
        if grid_dir:
            exponential_grid(r["model"]).to_csv(grid_dir / f"grid_t{r['t']:.3f}.csv")

        def first(key):
            v = r.get(key)
            return f"{v[0].real:12.6f}" if v is not None else f"{'-':>12}"

        print(f"{r['t']:5.2f} {first('w_plus')} {first('b_plus')} {first('w_minus')} "
              f"{first('b_minus')} {max(tr.errors):10.2e}")
    doc = {"config": {"eta": cfg.eta, "nu": cfg.nu, "beta": cfg.beta, "n": cfg.n, "dt": cfg.dt,
                      "times": list(cfg.times)},
           "blowup_time": report["blowup_time"], "source": report["source"],
           "checks": report["checks"], "rows": rows}
    Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote report to {args.out}")


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="padenet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="sample a built-in test function on a circle")
    s.add_argument("--function", choices=sorted(GENERATORS), required=True)
    s.add_argument("--n", type=int, required=True, help="half the number of samples")
    s.add_argument("--rho", type=float, default=laurent.DEFAULT_RHO)
    s.add_argument("--refined", action="store_true", help="also store 4n samples for --check")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("coeffs", help="Laurent coefficients from samples")
    s.add_argument("--samples", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--check", action="store_true", help="aliasing estimate from the 'refined' samples")
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("fit", help="fit a network to samples")
    s.add_argument("--samples", required=True)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--m1", type=int, required=True)
    s.add_argument("--n1-minus", type=int)
    s.add_argument("--m1-minus", type=int)
    s.add_argument("--tol", type=float, default=1e-14)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--rect", default=",".join(str(x) for x in DEFAULT_RECT))
    s.add_argument("--phi", choices=["cos", "one"], default="cos")
    s.add_argument("--z0", default="-1.2+0i")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("poles", help="print recovered poles")
    s.add_argument("--model", required=True)
    s.add_argument("--cluster-radius", type=float, default=DEFAULT_CLUSTER_RADIUS)
    s.set_defaults(func=cmd_poles)

    s = sub.add_parser("eval", help="evaluate a model on a grid")
    s.add_argument("--model", required=True)
    s.add_argument("--re", required=True, help="lo:hi:n")
    s.add_argument("--im", required=True, help="lo:hi:n")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("demo", help="run the 40-pole example end to end")
    s.add_argument("name", choices=["exfun"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--location", type=int, choices=sorted(EXFUN_LOCATIONS), default=1)
    s.add_argument("--tol", type=float, default=1e-14)
    s.add_argument("--cluster-radius", type=float, default=1e-4)
    s.add_argument("--resolution", type=int, default=121)
    s.add_argument("--out-dir", default="exfun_out")
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("pde", help="track singularities of the Burgers-type solution")
    s.add_argument("--eta", type=float, default=1.0)
    s.add_argument("--nu", type=float, default=0.1)
    s.add_argument("--beta-exp", type=float, default=-0.25, help="ln(beta)")
    s.add_argument("--n", type=int, default=40)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--times", default="0:0.1:1")
    s.add_argument("--tol", type=float, default=1e-3)
    s.add_argument("--z0", default="-1.2+0i")
    s.add_argument("--n1", type=int, default=10)
    s.add_argument("--m1", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--source", choices=["exact", "ode"], default="exact")
    s.add_argument("--include-coeffs", action="store_true")
    s.add_argument("--grid-dir")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_pde)
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_dash_values(argv))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default", RepresentationWarning)
            args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
