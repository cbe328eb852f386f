"""Command-line front end.

Every subcommand writes a CSV table or a JSON report to ``--output`` (or
stdout). ``--verify`` additionally runs invariant checks for that
subcommand and exits with status 2 if any fails. Invalid arguments exit
with status 1.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import apriori_bounds
from .decay import class_membership, fit_gaussian_decay, weighted_l2
from .exceptions import HardyLabError
from .families import (GaussianFamily, GaussianSum, chirp_parameter, fourier_family,
                       load_families, numeric_fourier_mismatch, theorem_check)
from .fourier import fourier_transform
from .gain import (gain_first_exact, gain_spectrum, gain_table_csv, iterate_gain,
                   limit_gain, sandwich_check)
from .grid import DEFAULT_EXTENT, DEFAULT_N, Grid, SampledFunction, fmt
from .hermite import hermite_functions, hermite_synthesize
from .oscillator import (OscillatorState, frft, oscillator_evolve, project_adaptive,
                         sample_times, schrodinger_evolve, vemuri_curve, vemuri_omega)

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None


def _json_safe(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, (np.floating,)):
        return _json_safe(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_json_safe(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _grid(args) -> Grid:
    if args.n < 8 or args.n % 2:
        raise ValueError(f"--n must be an even integer >= 8, got {args.n}")
    if not args.extent > 0:
        raise ValueError(f"--extent must be positive, got {args.extent}")
    return Grid.from_extent(args.n, args.extent)


def _map(args, func, items):
    items = list(items)
    if args.jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(func, items))
    return [func(i) for i in items]


# sources ------------------------------------------------------------------

def _add_source(p, default_gaussian=True):
    g = p.add_argument_group("input function (one of)")
    m = g.add_mutually_exclusive_group()
    m.add_argument("--gaussian", type=_complex, metavar="LAM",
                   help="exp(-pi LAM x^2); LAM may be complex, e.g. 0.5+0.3j"
                        + (" (default 1.0)" if default_gaussian else ""))
    m.add_argument("--chirp", type=float, metavar="R", help="chirped Gaussian with r=R in (0,1)")
    m.add_argument("--hermite", type=_nonneg_int, metavar="N", help="Hermite function h_N")
    m.add_argument("--family", metavar="FILE", help="family JSON file")
    g.add_argument("--index", type=_nonneg_int, default=0, help="family index in FILE (default 0)")


def _load_family(args) -> GaussianFamily:
    fams = load_families(args.family)
    if args.index >= len(fams):
        raise ValueError(f"--index {args.index} out of range: {args.family} holds {len(fams)} families")
    return fams[args.index]


def _source(args, grid):
    """Returns ``(label, samples, GaussianSum or None)``."""
    if args.hermite is not None:
        return f"h_{args.hermite}", SampledFunction(grid, hermite_functions(args.hermite, grid.points)[-1]), None
    if args.family is not None:
        fam = _load_family(args)
        gs = fam.to_sum()
        return f"{fam.kind} family", gs.sample(grid), gs
    if args.chirp is not None:
        if not 0 < args.chirp < 1:
            raise ValueError(f"--chirp must lie in (0, 1), got {args.chirp}")
        gs = GaussianSum(np.array([chirp_parameter(args.chirp)]), np.array([1.0]))
        return f"chirp r={args.chirp:g}", gs.sample(grid), gs
    lam = args.gaussian if args.gaussian is not None else 1.0 + 0j
    if not lam.real > 0:
        raise ValueError(f"--gaussian needs a positive real part, got {lam}")
    gs = GaussianSum(np.array([lam]), np.array([1.0]))
    return f"gaussian lam={lam}", gs.sample(grid), gs


# subcommands -------------------------------------------------------------

def cmd_gain(args):
    if args.depth < 0 or args.stages < 0:
        raise ValueError("--depth and --stages must be nonnegative")
    traj = iterate_gain(args.depth, args.stages, args.variant)
    exact = limit_gain(args.depth)
    spectral = limit_gain(args.depth, "spectral")
    if args.format == "csv":
        text = gain_table_csv(traj)
    else:
        text = dump_json({
            "depth": args.depth, "variant": args.variant, "stages": args.stages,
            "rows": [{"stage": s.stage, "theta": list(s.theta), "theta_float": list(s.floats())}
                     for s in traj],
            "limit": {"exact": list(exact.values), "spectral": list(spectral.values)},
        })
    if args.plot:
        from .plotting import plot_gain
        plot_gain(traj, args.plot)
    return text, {"traj": traj, "exact": exact, "spectral": spectral}


def cmd_eigen(args):
    if args.depth < 0:
        raise ValueError("--depth must be nonnegative")
    sp = gain_spectrum(args.depth)
    res = sp.residuals()
    norms = np.linalg.norm(sp.eigenvectors, axis=1)
    k = args.depth
    if args.format == "csv":
        rows = [[mu + 1, sp.eigenvalues[mu], res[mu], norms[mu], *sp.eigenvectors[mu]]
                for mu in range(k + 1)]
        text = rows_to_csv(["mu", "eigenvalue", "residual", "norm"] + [f"v_{j}" for j in range(k + 1)], rows)
    else:
        text = dump_json({"depth": k, "alpha": sp.alpha, "eigenpairs": [
            {"mu": mu + 1, "eigenvalue": sp.eigenvalues[mu], "residual": res[mu],
             "norm": norms[mu], "vector": sp.eigenvectors[mu]} for mu in range(k + 1)]})
    return text, {"spectrum": sp, "residuals": res, "norms": norms}


def cmd_decay(args):
    grid = _grid(args)
    label, f, gs = _source(args, grid)
    if args.a < 0:
        raise ValueError("--a must be nonnegative")
    fhat = gs.fourier().sample(grid.dual()) if gs is not None else None
    mem = class_membership(f, args.a, fhat=fhat)
    fit = None
    if args.window:
        fit = fit_gaussian_decay(f, tuple(args.window))
    rep = {"source": label, **mem.to_dict()}
    if fit is not None:
        rep["fit_window"] = fit.to_dict()
    if args.format == "json":
        text = dump_json(rep)
    else:
        def b(x):
            return x.b_hat if x is not None else float("nan")
        row = [args.a, mem.in_E2, mem.in_Einf, mem.norm_f.value, mem.norm_fhat.value,
               mem.norm_f.divergent, mem.norm_fhat.divergent, b(mem.fit_f), b(mem.fit_fhat)]
        text = rows_to_csv(["a", "in_E2", "in_Einf", "weighted_l2_f", "weighted_l2_fhat",
                            "divergent_f", "divergent_fhat", "b_hat_f", "b_hat_fhat"], [row])
    if args.plot:
        from .plotting import plot_decay
        plot_decay(f, fit or mem.fit_f, args.plot)
    return text, {"f": f, "membership": mem}


def _sampled_csv(f: SampledFunction, args) -> str:
    if args.format == "csv":
        return f.to_csv()
    return dump_json({"x": f.x, "re": f.values.real, "im": f.values.imag})


def cmd_frft(args):
    grid = _grid(args)
    label, f, _ = _source(args, grid)
    out = frft(f, args.beta, args.method)
    if args.plot:
        from .plotting import plot_samples
        plot_samples([("input", f), (f"beta={args.beta:g}", out)], args.plot)
    return _sampled_csv(out, args), {"f": f, "out": out}


def cmd_evolve(args):
    grid = _grid(args)
    label, f, _ = _source(args, grid)
    times = args.times
    if args.mode == "oscillator":
        coeffs, basis, _ = project_adaptive(f)
        state = OscillatorState(coeffs)

        def one(t):
            return hermite_synthesize(oscillator_evolve(state, t).coeffs, basis)
    else:
        def one(t):
            return schrodinger_evolve(f, t)
    snaps = _map(args, one, times)
    if args.format == "csv":
        rows = []
        for t, s in zip(times, snaps):
            rows.extend([t, xi, v.real, v.imag] for xi, v in zip(s.x, s.values))
        text = rows_to_csv(["t", "x", "re", "im"], rows)
    else:
        text = dump_json({"mode": args.mode, "snapshots": [
            {"t": t, "x": s.x, "re": s.values.real, "im": s.values.imag} for t, s in zip(times, snaps)]})
    if args.plot:
        from .plotting import plot_samples
        plot_samples([(f"t={t:g}", s) for t, s in zip(times, snaps)], args.plot)
    return text, {"f": f, "times": times, "snapshots": snaps}


def cmd_vemuri(args):
    if not 0 < args.a < 1:
        raise ValueError(f"--a must lie in (0, 1), got {args.a}")
    if args.eps < 0:
        raise ValueError(f"--eps must be nonnegative, got {args.eps}")
    if args.points < 2 or not args.t_max > args.t_min:
        raise ValueError("need --points >= 2 and --t-max > --t-min")
    curve = vemuri_curve(args.a, args.eps, sample_times(args.t_min, args.t_max, args.points))
    exc = curve.exceptional()
    if args.format == "csv":
        rows = [[t, om, curve.pi_R, bool(e)] for t, om, e in zip(curve.t, curve.omega, exc)]
        text = rows_to_csv(["t", "omega", "pi_R", "exceptional"], rows)
    else:
        tmin, omin = curve.refined_minimum()
        text = dump_json({"a": args.a, "eps": args.eps, "R": curve.R, "pi_R": curve.pi_R,
                          "refined_minimizer": tmin, "refined_minimum": omin,
                          "rows": [{"t": t, "omega": om, "exceptional": bool(e)}
                                   for t, om, e in zip(curve.t, curve.omega, exc)]})
    if args.plot:
        from .plotting import plot_vemuri
        plot_vemuri(curve, args.plot)
    return text, {"curve": curve}


def _family_from_args(args) -> GaussianFamily:
    if args.hermite is not None:
        raise ValueError(f"{args.command} needs a Gaussian family; --hermite is not one")
    if args.family is not None:
        return _load_family(args)
    if args.chirp is not None:
        return GaussianFamily.from_dict({"kind": "chirp", "atoms": [{"location": args.chirp, "weight_re": 1.0}]})
    lam = args.gaussian if args.gaussian is not None else 1.0 + 0j
    if lam.imag != 0:
        raise ValueError("a complex --gaussian is not a family; use --chirp or --family")
    return GaussianFamily.from_dict({"kind": "laplace", "atoms": [{"location": lam.real, "weight_re": 1.0}]})


def _betas(args):
    if args.betas:
        return list(args.betas)
    n = args.sweep
    return [-math.pi + (k + 0.5) * 2 * math.pi / n for k in range(n)]


def cmd_family_check(args):
    grid = _grid(args)
    fam = _family_from_args(args)
    rep = theorem_check(fam, args.a, _betas(args), grid=grid, jobs=args.jobs)
    if args.format == "json":
        text = dump_json(rep.to_dict())
    else:
        rows = [[c.beta, c.b_hat if c.b_hat is not None else float("nan"), c.exact_exponent,
                 c.meets_level, c.strict_excess, c.at_quarter_turn] for c in rep.angles]
        text = rows_to_csv(["beta", "b_hat", "exact_exponent", "meets_level", "strict_excess",
                            "quarter_turn"], rows)
    return text, {"family": fam, "report": rep, "grid": grid}


def cmd_apriori(args):
    if not 0 < args.a < 1:
        raise ValueError(f"--a must lie in (0, 1), got {args.a}")
    gs = None
    if args.family is not None or args.chirp is not None or args.gaussian is not None:
        gs = _family_from_args(args).to_sum()
        c2f, c2fhat = gs.weighted_norm(args.a), gs.fourier().weighted_norm(args.a)
        if not (math.isfinite(c2f) and math.isfinite(c2fhat)):
            raise ValueError(f"the family is not in the weighted L2 class at a={args.a}")
    else:
        if args.c2f is None or args.c2fhat is None:
            raise ValueError("give --c2f and --c2fhat, or a family source")
        c2f, c2fhat = args.c2f, args.c2fhat
    bounds = [apriori_bounds(o, o, args.a, c2f, c2fhat) for o in range(args.max_order + 1)]
    measured = None
    if gs is not None:
        grid = _grid(args)
        x, dx, gh = grid.points, grid.spacing, gs.fourier()
        measured = []
        for o in range(args.max_order + 1):
            d = gs.derivative(o, x)
            measured.append([math.sqrt(np.sum(np.abs(d) ** 2) * dx), float(np.abs(d).max()),
                             float(np.sum(np.abs(d)) * dx), float(np.abs(x ** o * gh(x)).max())])
    header = ["order", "sobolev_l2", "deriv_sup", "deriv_l1", "moment_sup", "implied_M"]
    rows = [[b.k, b.sobolev_l2, b.deriv_sup, b.deriv_l1, b.moment_sup, b.implied_M] for b in bounds]
    if measured is not None:
        header += ["measured_l2", "measured_sup", "measured_l1", "measured_moment"]
        rows = [r + m for r, m in zip(rows, measured)]
    if args.format == "csv":
        text = rows_to_csv(header, rows)
    else:
        text = dump_json({"a": args.a, "c2f": c2f, "c2fhat": c2fhat,
                          "rows": [dict(zip(header, r)) for r in rows]})
    return text, {"bounds": bounds, "measured": measured}


# verification ------------------------------------------------------------

def _v_gain_limits(args, ctx):
    ex, sp = ctx["exact"], ctx["spectral"]
    ok = ex.values[0] == gain_first_exact(args.depth)
    ok &= max(abs(float(a) - b) for a, b in zip(ex.values, sp.values)) < 1e-12
    return ok, "limit equals (2k+3)/(2k+4) and spectral sum agrees within 1e-12"


def _v_gain_traj(args, ctx):
    traj = ctx["traj"]
    half = Fraction(1, 2)
    ok = all(half <= t < 1 for s in traj for t in s.theta)
    ok &= all(b >= a for s0, s1 in zip(traj, traj[1:]) for a, b in zip(s0.theta, s1.theta))
    rep = sandwich_check(args.depth, max(args.stages, 1))
    ok &= rep.lower_holds and rep.limit_bound_holds
    return ok, "iterates monotone, inside [1/2, 1), bracketed by the Jacobi iterates and the limit"


def _v_eigen(args, ctx):
    n = ctx["norms"]
    ok = ctx["residuals"].max() < 1e-12 and np.ptp(n) < 1e-12
    return ok, "eigen residuals < 1e-12 and equal eigenvector norms"


def _v_decay(args, ctx):
    f = ctx["f"]
    fh = fourier_transform(f)
    ok = abs(fh.norm() - f.norm()) <= 1e-10 * max(1.0, f.norm())
    ok &= abs(weighted_l2(f, 0.0).value - f.norm()) <= 1e-10 * max(1.0, f.norm())
    return ok, "Plancherel and a=0 weighted norm within 1e-10"


def _v_frft(args, ctx):
    f, out = ctx["f"], ctx["out"]
    tol = 1e-10 if args.method == "hermite" else 1e-6
    return abs(out.norm() - f.norm()) <= tol * max(1.0, f.norm()), f"L2 norm preserved within {tol:g}"


def _v_evolve(args, ctx):
    f = ctx["f"]
    ok = all(abs(s.norm() - f.norm()) <= 1e-8 * max(1.0, f.norm()) for s in ctx["snapshots"])
    return ok, "L2 norm preserved within 1e-8 at every snapshot"


def _v_vemuri(args, ctx):
    c = ctx["curve"]
    ok = abs(vemuri_omega(c.a, c.eps, 1 / (4 * math.pi)) - c.pi_R) <= 1e-12
    ok &= bool(np.all(c.omega >= c.pi_R - 1e-12))
    return ok, "Omega(1/(4 pi)) = pi R and Omega >= pi R on all samples"


def _v_family(args, ctx):
    fam, grid = ctx["family"], ctx["grid"]
    ok = numeric_fourier_mismatch(fam, grid) < 1e-8
    ok &= abs(fourier_family(fourier_family(fam)).to_sum()(0.0) - fam.to_sum()(0.0)) < 1e-12
    return ok, "closed-form Fourier image matches the sampled transform within 1e-8"


def _v_apriori(args, ctx):
    ok = all(all(math.isfinite(v) and v > 0 for v in (b.sobolev_l2, b.deriv_sup, b.deriv_l1, b.moment_sup))
             for b in ctx["bounds"])
    if ctx["measured"] is not None:
        for b, m in zip(ctx["bounds"], ctx["measured"]):
            lim = (b.sobolev_l2, b.deriv_sup, b.deriv_l1, b.moment_sup)
            ok &= all(v <= L * (1 + 1e-9) for v, L in zip(m, lim))
    return ok, "bounds positive, finite and above the measured norms"


VERIFIERS = {
    "gain": [_v_gain_limits, _v_gain_traj],
    "eigen": [_v_eigen],
    "decay": [_v_decay],
    "frft": [_v_frft],
    "evolve": [_v_evolve],
    "vemuri": [_v_vemuri],
    "family-check": [_v_family],
    "apriori": [_v_apriori],
}

COMMANDS = {
    "gain": cmd_gain, "eigen": cmd_eigen, "decay": cmd_decay, "frft": cmd_frft,
    "evolve": cmd_evolve, "vemuri": cmd_vemuri, "family-check": cmd_family_check,
    "apriori": cmd_apriori,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--verify", action="store_true",
                        help="run invariant checks; exit 2 if any fails")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker threads for sweeps (default 1)")

    gridp = _Parser(add_help=False)
    gridp.add_argument("--n", type=int, default=DEFAULT_N, help=f"grid points (default {DEFAULT_N})")
    gridp.add_argument("--extent", type=float, default=DEFAULT_EXTENT,
                       help=f"grid half-extent L (default {DEFAULT_EXTENT:g})")

    def fmt_arg(p, default):
        p.add_argument("--format", choices=("csv", "json"), default=default,
                       help=f"output format (default {default})")

    def plot_arg(p):
        p.add_argument("--plot", metavar="PNG", help="also render a figure to this file")

    parser = _Parser(prog="hardylab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gain", parents=[common], help="decay-gain trajectory and limit")
    p.add_argument("--depth", type=int, default=2, help="depth k (default 2)")
    p.add_argument("--stages", type=int, default=60, help="number of stages (default 60)")
    p.add_argument("--variant", choices=("original", "auxiliary"), default="original",
                   help="update order (default original)")
    fmt_arg(p, "csv")
    plot_arg(p)

    p = sub.add_parser("eigen", parents=[common], help="eigenpairs of the companion matrix")
    p.add_argument("--depth", type=int, default=2, help="depth k (default 2)")
    fmt_arg(p, "csv")

    p = sub.add_parser("decay", parents=[common, gridp], help="weighted-class membership and decay fits")
    _add_source(p)
    p.add_argument("--a", type=float, default=0.5, help="weight level (default 0.5)")
    p.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"),
                   help="extra decay fit on this |x| window")
    fmt_arg(p, "json")
    plot_arg(p)

    p = sub.add_parser("frft", parents=[common, gridp], help="fractional Fourier transform")
    _add_source(p)
    p.add_argument("--beta", type=float, required=True, help="angle in radians")
    p.add_argument("--method", choices=("hermite", "kernel"), default="hermite",
                   help="Hermite multiplier (default) or dense kernel quadrature")
    fmt_arg(p, "csv")
    plot_arg(p)

    p = sub.add_parser("evolve", parents=[common, gridp], help="oscillator or free Schrodinger snapshots")
    _add_source(p)
    p.add_argument("--mode", choices=("oscillator", "schrodinger"), default="oscillator",
                   help="evolution (default oscillator)")
    p.add_argument("--times", type=float, nargs="+", default=[0.0, 0.1], help="snapshot times")
    fmt_arg(p, "csv")
    plot_arg(p)

    p = sub.add_parser("vemuri", parents=[common], help="decay exponent curve Omega(t)")
    p.add_argument("--a", type=float, default=0.6, help="a in (0,1) (default 0.6)")
    p.add_argument("--eps", type=float, default=0.0, help="epsilon >= 0 (default 0)")
    p.add_argument("--t-min", type=float, default=0.0, help="first time (default 0)")
    p.add_argument("--t-max", type=float, default=0.16, help="last time (default 0.16)")
    p.add_argument("--points", type=int, default=400, help="number of samples (default 400)")
    fmt_arg(p, "csv")
    plot_arg(p)

    p = sub.add_parser("family-check", parents=[common, gridp], help="sharp decay checks for a family")
    _add_source(p)
    p.add_argument("--a", type=float, required=True, help="weight level a in (0,1)")
    p.add_argument("--betas", type=float, nargs="+", help="angles to test")
    p.add_argument("--sweep", type=_positive_int, default=8,
                   help="if --betas is absent, test this many equispaced angles (default 8)")
    fmt_arg(p, "json")

    p = sub.add_parser("apriori", parents=[common, gridp], help="a-priori derivative and moment bounds")
    _add_source(p, default_gaussian=False)
    p.add_argument("--a", type=float, required=True, help="weight level a in (0,1)")
    p.add_argument("--max-order", type=_nonneg_int, default=6, help="largest k=j (default 6)")
    p.add_argument("--c2f", type=float, help="weighted L2 norm of f (when no source is given)")
    p.add_argument("--c2fhat", type=float, help="weighted L2 norm of fhat (when no source is given)")
    fmt_arg(p, "csv")
    return parser


def run(argv=None) -> int:
    """Parse ``argv``, run one subcommand and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "plot", None) is None:
            args.plot = None
        text, ctx = COMMANDS[args.command](args)
        _emit(args, text)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, HardyLabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.verify:
        failed = False
        for check in VERIFIERS.get(args.command, []):
            ok, what = check(args, ctx)
            print(f"verify {'PASS' if ok else 'FAIL'}: {what}", file=sys.stderr)
            failed |= not ok
        if failed:
            return EXIT_VERIFY
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
