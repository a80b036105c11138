"""Command-line front end: ``gcmlab {fit,simulate,limit,verify}``.

Exit codes: 0 success, 1 tolerance failure, 2 I/O or parse error,
3 validation error (schema, theorem hypothesis or estimator precondition).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from ._errors import GcmlabError, ValidationError
from .config import load_config
from .density import DensitySample, convex_density_estimate, grenander_decreasing, grenander_increasing
from .gcm import GridFunction, gcm
from .harness import integral_error_check, run_experiment
from .kernels import KernelSpec
from .limits import (
    DEFAULT_C_MAX,
    DEFAULT_DELTA,
    DriverSpec,
    LimitSpec,
    chernoff_sample,
    rate_dn,
    sample_limit_batch,
    theorem_constants,
)
from .processes import DependenceModel, HermiteSubordination
from .regression import (
    RegressionSample,
    convexified_kernel_regression,
    cumulative_polygon,
    isotonic_regression,
    isotonized_kernel_regression,
)

EXIT_OK, EXIT_TOLERANCE, EXIT_IO, EXIT_VALIDATION = 0, 1, 2, 3
ESTIMATORS = ("isoreg", "grenander", "convexreg", "isokernel", "convexdensity")


class ParseError(GcmlabError):
    """Malformed data file (reported with path and line number)."""


# -- CSV helpers -------------------------------------------------------------------


def read_column(path, column=None) -> np.ndarray:
    """Read one numeric column from a CSV file with a header row.

    ``column`` defaults to the only column, or to ``y``/``x`` when present.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: line 1: empty file, expected a header row")
    header = [h.strip() for h in rows[0]]
    if column is None:
        if len(header) == 1:
            column = header[0]
        else:
            column = next((c for c in ("y", "x", "value") if c in header), None)
            if column is None:
                raise ParseError(f"{path}: line 1: cannot choose a column from {header}; use --column")
    if column not in header:
        raise ParseError(f"{path}: line 1: no column {column!r} in header {header}")
    k = header.index(column)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            val = float(row[k])
        except ValueError:
            raise ParseError(f"{path}: line {lineno}: cannot parse {row[k]!r} as a number") from None
        if not np.isfinite(val):
            raise ParseError(f"{path}: line {lineno}: non-finite value {row[k]!r}")
        out.append(val)
    if not out:
        raise ParseError(f"{path}: no data rows")
    return np.array(out)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    return p.open("w", newline=""), True


def write_table(path, header, columns):
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    finally:
        if close:
            fh.close()


# -- fit -------------------------------------------------------------------------


def _bandwidth(args, n):
    if args.bandwidth is not None:
        return float(args.bandwidth)
    return float(args.bandwidth_constant * n**args.bandwidth_exponent)


def fit_table(args, data):
    """Run the requested estimator; returns (t, value, slope, sidecar dict).

    ``value`` is the hull ``T(x_n)`` and ``slope`` its derivative; for isoreg,
    grenander and isokernel the estimate is the slope column, for the convex
    fits it is the value column.
    """
    kernel = KernelSpec(args.kernel)
    est = args.estimator
    side = {"estimator": est, "n": int(data.shape[0]), "kernel": kernel.to_dict()}
    if est == "isoreg":
        sample = RegressionSample(data)
        fitted = isotonic_regression(sample)
        hull = gcm(cumulative_polygon(fitted))
        t = sample.t
        side.update(estimate_column="slope", integral_check={"sum_y": float(data.sum()),
                                                             "sum_fit": float(fitted.sum())})
        return t, hull(t), fitted, side
    if est == "grenander":
        fit = grenander_decreasing(data) if args.decreasing else grenander_increasing(data)
        t = np.unique(np.concatenate((data, [0.0])))
        side.update(estimate_column="slope", increasing=not args.decreasing,
                    integral_check={"integral_of_estimate": fit.integral()})
        return t, fit.hull(t), fit(t), side
    h = _bandwidth(args, data.shape[0])
    side["h"] = h
    if est == "convexreg":
        res = convexified_kernel_regression(RegressionSample(data), kernel, h, args.grid_size)
        t = res.grid
        side.update(estimate_column="value", integral_check={"c": res.c})
        return t, res.fit(t), res.fit.slope_at(t), side
    if est == "isokernel":
        res = isotonized_kernel_regression(RegressionSample(data), kernel, h, args.grid_size)
        t = res.grid
        side.update(estimate_column="slope")
        return t, res.fit(t), res.fit.slope_at(t), side
    support = tuple(args.support) if args.support else (0.0, np.inf)
    res = convex_density_estimate(DensitySample(data, support), kernel, h, grid_size=args.grid_size)
    t = res.grid
    side.update(estimate_column="value", support=list(support), integral_check={"I_n": res.integral})
    return t, res.fit(t), res.fit.slope_at(t), side


def cmd_fit(args):
    data = read_column(args.input, args.column)
    t, value, slope, side = fit_table(args, data)
    out = args.output or str(Path(args.input).with_suffix("")) + f"_{args.estimator}.csv"
    write_table(out, ["t", "value", "slope"], [t, value, slope])
    side.update(input=str(args.input), output=str(out))
    sidecar = Path(out).with_suffix(".json")
    sidecar.write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} and {sidecar}")
    return EXIT_OK


# -- simulate ----------------------------------------------------------------------


def model_from_args(args) -> DependenceModel:
    if args.model == "iid":
        return DependenceModel("iid", sigma=args.sigma, dist=args.dist)
    if args.model == "ar1":
        return DependenceModel("ar1", rho=args.rho, innovation_sd=args.innovation_sd)
    g = "identity" if args.model == "fgn" else args.g
    return DependenceModel("lrd", sigma=args.sigma, H=args.H, subordination=HermiteSubordination(g))


def cmd_simulate(args):
    x = model_from_args(args).generate(args.n, args.seed)
    write_table(args.output, ["index", "value"], [np.arange(1, args.n + 1), x])
    return EXIT_OK


# -- limit -----------------------------------------------------------------------


def _exponent_text(e):
    f = Fraction(e).limit_denominator(1000)
    return "" if f == 0 else (f"^{{{f}}}" if f.denominator != 1 or f.numerator != 1 else "")


def format_rate(exp_n, exp_h):
    parts = []
    if exp_n != 0:
        parts.append("n" + _exponent_text(exp_n))
    if exp_h != 0:
        parts.append("h" + _exponent_text(exp_h))
    return " ".join(parts) if parts else "1"


def cmd_limit_draw(args):
    if args.driver == "smoothed":
        driver = DriverSpec("smoothed", scale=args.scale, kernel=args.kernel, derivative=not args.use_k)
    else:
        driver = DriverSpec(args.driver, scale=args.scale, H=args.H, rank=args.rank)
    spec = LimitSpec(p=args.p, A=args.A, driver=driver, c_max=args.c_max, delta=args.delta, seed=args.seed)
    draws = sample_limit_batch(spec, args.R)
    write_table(args.output, ["t_value", "slope", "argmin"], [draws["t_value"], draws["slope"], draws["argmin"]])
    unstable = int(np.sum(~draws["stable"]))
    if unstable:
        print(f"warning: {unstable} draw(s) flagged unstable after redraws", file=sys.stderr)
    return EXIT_OK


def cmd_limit_rate(args):
    e_n, e_h = rate_dn((args.a, args.a_h), (args.b, args.b_h), args.beta, args.p)
    print(format_rate(e_n, e_h))
    return EXIT_OK


def cmd_limit_chernoff(args):
    x = chernoff_sample(args.R, args.c_max, args.delta, args.seed)
    write_table(args.output, ["argmin"], [x])
    return EXIT_OK


def cmd_limit_constants(args):
    params = {}
    for item in args.param:
        key, _, val = item.partition("=")
        if not _:
            raise ValidationError(f"parameter {item!r} must look like name=value", path="/param")
        params[key] = val if key == "kernel" else float(val)
    c = theorem_constants(args.theorem, params)
    print(json.dumps({"theorem": c.theorem, "c1": c.c1, "c2": c.c2, "d_n": c.dn_text,
                      "rate_exponent": c.rate_exponent, **c.extra}, indent=2))
    return EXIT_OK


# -- verify ------------------------------------------------------------------------


def cmd_verify(args):
    doc = load_config(args.config)
    cfg = doc.experiment
    tol = dict(cfg.tolerances)
    if args.exponent_tol is not None:
        tol["exponent"] = args.exponent_tol
    if args.ks_tol is not None:
        tol["ks"] = args.ks_tol
    if tol != cfg.tolerances:
        cfg = type(cfg).from_dict({**cfg.to_dict(), "tolerances": tol})
    report = run_experiment(cfg)
    outdir = Path(args.output_dir or doc.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    tag = cfg.digest()
    summary = report.to_json()
    if cfg.scenario == "isoreg" and args.integral:
        chk = integral_error_check(cfg)
        summary["integral_check"] = {"n": chk["n"], "ks": chk["ks"]}
    (outdir / f"{cfg.scenario}_{tag}.json").write_text(json.dumps(summary, indent=2) + "\n")
    for r in report.results:
        write_table(outdir / f"{cfg.scenario}_{r.n}_{tag}.csv", ["replication", "error", "scaled_error"],
                    [np.arange(r.errors.shape[0]), r.errors, r.scaled])
    print(f"theorem {report.theorem}: {cfg.scenario}, R={cfg.R}, seed={cfg.seed}")
    print(f"{'n':>8} {'median|err|':>12} {'KS':>8}")
    for r in report.results:
        print(f"{r.n:>8d} {r.median_abs_error:>12.5g} {r.ks:>8.4f}")
    fitted = "n/a" if report.exponent is None else f"{report.exponent:.4f} (se {report.exponent_stderr:.4f})"
    print(f"fitted exponent {fitted}, theory {report.theoretical_exponent:.4f}")
    for c in report.checks:
        shown = "n/a" if c["value"] is None else f"{c['value']:.4f}"
        print(f"check {c['name']}: {shown} vs tolerance {c['tolerance']:g} -> {'PASS' if c['ok'] else 'FAIL'}")
    print(f"report written to {outdir}")
    return EXIT_OK if report.passed else EXIT_TOLERANCE


# -- parser ------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="gcmlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gcmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a shape-restricted estimator to a CSV column")
    p.add_argument("--estimator", required=True, choices=ESTIMATORS)
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--column", help="column to read (default: the only column, or y/x)")
    p.add_argument("--output", help="fit CSV (default: <input>_<estimator>.csv)")
    p.add_argument("--kernel", default="epanechnikov", choices=["epanechnikov", "biweight", "triweight"])
    p.add_argument("--bandwidth", type=float, help="fixed bandwidth h")
    p.add_argument("--bandwidth-constant", type=float, default=1.0)
    p.add_argument("--bandwidth-exponent", type=float, default=-0.2)
    p.add_argument("--grid-size", type=int)
    p.add_argument("--support", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--decreasing", action="store_true", help="Grenander: nonincreasing density on [0, max)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="generate one error sequence")
    p.add_argument("--model", required=True, choices=["iid", "ar1", "fgn", "lrd"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--dist", default="normal", choices=["normal", "uniform", "laplace"])
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--innovation-sd", type=float, default=1.0)
    p.add_argument("--H", type=float, default=0.75)
    p.add_argument("--g", default="identity", choices=["identity", "square_minus_one", "sign"])
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("limit", help="sample limit laws, rates and constants")
    lsub = p.add_subparsers(dest="limit_command", required=True)
    d = lsub.add_parser("draw", help="draws of T(A|s|^p + v)(0), its slope and argmin (default)")
    d.add_argument("--driver", default="bm", choices=["none", "bm", "fbm", "hermite", "linear", "smoothed"])
    d.add_argument("--p", type=float, default=2.0)
    d.add_argument("--A", type=float, default=1.0)
    d.add_argument("--scale", type=float, default=1.0)
    d.add_argument("--H", type=float, default=0.5)
    d.add_argument("--rank", type=int, default=1)
    d.add_argument("--kernel", default="epanechnikov")
    d.add_argument("--use-k", action="store_true", help="smoothed driver with k instead of k'")
    d.add_argument("--c-max", type=float, default=DEFAULT_C_MAX)
    d.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    d.add_argument("--R", type=int, default=1000)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--output", default="-")
    d.set_defaults(func=cmd_limit_draw)
    r = lsub.add_parser("rate", help="exponents of d_n = (a_n b_n^-beta)^(1/(p-beta))")
    r.add_argument("--a", type=float, required=True, help="exponent of n in a_n")
    r.add_argument("--a-h", type=float, default=0.0, help="exponent of h in a_n")
    r.add_argument("--b", type=float, required=True, help="exponent of n in b_n")
    r.add_argument("--b-h", type=float, default=0.0, help="exponent of h in b_n")
    r.add_argument("--beta", type=float, required=True)
    r.add_argument("--p", type=float, default=2.0)
    r.set_defaults(func=cmd_limit_rate)
    c = lsub.add_parser("chernoff", help="draws of argmin(s^2 + B(s))")
    c.add_argument("--R", type=int, default=1000)
    c.add_argument("--c-max", type=float, default=DEFAULT_C_MAX)
    c.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--output", default="-")
    c.set_defaults(func=cmd_limit_chernoff)
    k = lsub.add_parser("constants", help="closed-form theorem constants")
    k.add_argument("--theorem", required=True)
    k.add_argument("--param", action="append", default=[], help="name=value, repeatable")
    k.set_defaults(func=cmd_limit_constants)

    p = sub.add_parser("verify", help="run a Monte Carlo verification config")
    p.add_argument("config", help="JSON config path or bundled name (e.g. thm3i)")
    p.add_argument("--output-dir")
    p.add_argument("--exponent-tol", type=float)
    p.add_argument("--ks-tol", type=float)
    p.add_argument("--integral", action="store_true", help="also run the integrated-error check (isoreg)")
    p.set_defaults(func=cmd_verify)
    return parser


def _normalise_argv(argv):
    # `gcmlab limit --driver none` is shorthand for `gcmlab limit draw --driver none`
    argv = list(argv)
    if argv and argv[0] == "limit":
        if len(argv) == 1 or (argv[1].startswith("-") and argv[1] not in ("-h", "--help")):
            argv.insert(1, "draw")
    return argv


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_normalise_argv(argv))
    try:
        return args.func(args)
    except (ParseError, OSError) as err:
        msg = str(err)
        if isinstance(err, OSError) and err.filename is not None and str(err.filename) not in msg:
            msg = f"{msg}: {err.filename}"
        print(f"gcmlab: error: {msg}", file=sys.stderr)
        return EXIT_IO
    except GcmlabError as err:
        print(f"gcmlab: error: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
