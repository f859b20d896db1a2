"""Command-line interface.

Exit status: 0 on success, 2 on usage errors, 1 on domain/contract errors
(including malformed parameter files).
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import analysis, approx, continuum, fit, geometry, paramfile
from .errors import ContractError, DomainError, NoSolution
from .oracle import p_exact


def _float_list(text):
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _t_values(text):
    """``1.5``, ``0,0.5,1`` or an inclusive range ``start:stop:step``."""
    try:
        if ":" in text:
            a, b, step = (float(x) for x in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            return list(analysis.grid_points((a, b, step)))
        return [float(x) for x in text.split(",")]
    except (ValueError, ContractError):
        raise argparse.ArgumentTypeError(f"bad t specification {text!r}")


def _p_range(text):
    try:
        a, _, b = text.partition("..")
        lo, hi = int(a), int(b or a)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty depth range {text!r}")
    return range(lo, hi + 1)


def _grid(text):
    vals = _float_list(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("grid is t_min,t_max,step")
    return tuple(vals)


def _params(text):
    if os.path.exists(text) or text.endswith(".json"):
        return paramfile.load(text)
    return paramfile.parse_inline(text)


def _num(x):
    return repr(float(x))


def _emit(payload, fmt, rows=None, header=None, out=None):
    out = sys.stdout if out is None else out
    if fmt == "json":
        json.dump(payload, out, indent=2)
        out.write("\n")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    out.write(buf.getvalue())


# -- subcommands -------------------------------------------------------------


def cmd_eval(args):
    if args.params is None and not args.exact:
        raise ContractError("eval needs --params and/or --exact")
    ts = np.array(args.t)
    cols = {"t": ts}
    if args.params is not None:
        cols["p_approx"] = np.atleast_1d(approx.p_approx(args.params, ts))
    if args.exact:
        cols["p_exact"] = np.atleast_1d(p_exact(ts))
    _emit(
        {key: [float(v) for v in col] for key, col in cols.items()},
        args.format,
        rows=zip(*[[float(v) for v in c] for c in cols.values()]),
        header=list(cols),
    )


def cmd_bounds(args):
    scheme = geometry.Scheme(args.base, args.depth)
    table = geometry.bounds(scheme)
    ends = table.endpoints()
    payload = {
        "base": scheme.base,
        "depth": scheme.depth,
        "N": scheme.n,
        "endpoints": ends,
        "intervals": [
            {"n": i + 1, "k_min": lo, "k_max": hi} for i, (lo, hi) in enumerate(table.intervals)
        ],
    }
    _emit(payload, args.format, rows=enumerate(ends), header=["j", "endpoint"])


def _fit_weights(spec, n, half_step):
    if spec in (None, "uniform"):
        return [0.5, 0.25, 0.25] if half_step and spec is None else [1.0 / n] * n
    w = _float_list(spec)
    if len(w) != n:
        raise ContractError(f"{len(w)} weights for {n} widths")
    return w


def cmd_fit(args):
    if args.half_step:
        table, scheme = geometry.half_step_table(), None
    else:
        if args.base is None or args.depth is None:
            raise ContractError("fit needs --base and --depth (or --half-step)")
        scheme = geometry.Scheme(args.base, args.depth)
        table = geometry.bounds(scheme)
    weights = _fit_weights(args.weights, len(table), args.half_step)
    meta = {"method": args.method}
    if scheme is not None:
        meta["scheme"] = {"base": scheme.base, "depth": scheme.depth}
    else:
        meta["table"] = "half-step"
    if args.method == "nodes":
        if args.nodes is None:
            raise ContractError("--method nodes needs --nodes")
        params = fit.fit_nodes(table, weights, args.nodes)
        report = analysis.max_deviation(params, args.grid)
        meta["nodes"] = list(args.nodes)
    else:
        config = fit.FitConfig(
            scan_grid=args.grid,
            iterations=args.iters,
            seed=args.seed,
            refine=not args.no_refine,
            threads=args.threads,
        )
        params, report = fit.fit_random(table, weights, config)
        meta.update(seed=args.seed, iterations=args.iters, refine=config.refine)
    meta["grid"] = list(args.grid)
    doc = paramfile.to_document(params, meta)
    doc["report"] = report.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    rows = [(i + 1, k, w) for i, (k, w) in enumerate(zip(params.k, params.w))]
    _emit(doc, args.format, rows=rows, header=["n", "k", "w"])


def cmd_scan(args):
    report = analysis.max_deviation(
        args.params, args.grid, refine=not args.no_refine, threads=args.threads
    )
    d = report.to_dict()
    rows = [(key, d[key] if key != "grid" else " ".join(map(_num, d[key]))) for key in d]
    _emit(d, args.format, rows=rows, header=["field", "value"])


def cmd_table(args):
    rows = analysis.convergence_table(args.base, args.p_range, args.t0, threads=args.threads)
    payload = {
        "base": args.base,
        "t0": args.t0,
        "rows": [{"p": p, "N": n, "abs_deviation": d} for p, n, d in rows],
    }
    # transposed like the printed tables: one row per quantity
    csv_rows = [
        ["p"] + [p for p, _, _ in rows],
        ["N"] + [n for _, n, _ in rows],
        ["abs_deviation"] + [d for _, _, d in rows],
    ]
    _emit(payload, args.format, rows=csv_rows)


def cmd_bench(args):
    res = analysis.bench(args.params, int(args.n), seed=args.seed)
    d = res.to_dict()
    _emit(d, args.format, rows=d.items(), header=["field", "value"])


def cmd_continuum(args):
    payload = {
        "t": args.t,
        "p_sq_integral": continuum.p_sq_continuum(args.t),
        "p_sq_exact": p_exact(args.t) ** 2,
    }
    if args.series is not None:
        res = continuum.p_sq_series(args.t, args.series)
        payload["series"] = {
            "n_terms": res.n_terms,
            "value": res.value,
            "bound": res.bound,
            "informative": res.informative,
        }
    flat = {k: v for k, v in payload.items() if k != "series"}
    if "series" in payload:
        flat.update({f"series_{k}": v for k, v in payload["series"].items()})
    _emit(payload, args.format, rows=flat.items(), header=["field", "value"])


def cmd_compare(args):
    ts = np.array(args.t)
    lo_env, hi_env, _ = approx.envelope_range(ts)
    sh_lo, sh_hi = approx.shenton_bounds(ts)
    cols = {
        "t": ts,
        "p_exact": p_exact(ts),
        "leading_1.116": approx.p_leading(approx.K_LEADING, ts),
        "envelope_lo": lo_env,
        "envelope_hi": hi_env,
        "shenton_lo": sh_lo,
        "shenton_hi": sh_hi,
    }
    if args.params is not None:
        cols["params"] = approx.p_approx(args.params, ts)
    cols = {key: [float(v) for v in np.atleast_1d(col)] for key, col in cols.items()}
    _emit(cols, args.format, rows=zip(*cols.values()), header=list(cols))


# -- parser ------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sumgauss", description="Sum-of-Gaussians approximations of the bounded Gauss integral."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate an approximation and/or the exact P(t)")
    p.add_argument("--params", help="JSON file or inline 'k=..;w=..'")
    p.add_argument("--t", type=_t_values, required=True, help="value, list, or start:stop:step")
    p.add_argument("--exact", action="store_true", help="include the reference P(t)")

    p = add("bounds", cmd_bounds, "interval endpoints of a partition scheme")
    p.add_argument("--base", type=int, choices=(2, 3), required=True)
    p.add_argument("--depth", type=int, required=True)

    p = add("fit", cmd_fit, "fit widths by node equations or random search")
    p.add_argument("--base", type=int, choices=(2, 3))
    p.add_argument("--depth", type=int)
    p.add_argument("--half-step", action="store_true",
                   help="three-interval half step (default weights 1/2,1/4,1/4)")
    p.add_argument("--weights", help="'uniform' or comma-separated weights")
    p.add_argument("--method", choices=("nodes", "random"), default="random")
    p.add_argument("--nodes", type=_float_list)
    p.add_argument("--iters", type=int, default=fit.FitConfig.iterations)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--grid", type=_grid, default=analysis.DEFAULT_GRID)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="also write the parameter file here")

    p = add("scan", cmd_scan, "sup-norm deviation of a parameter file")
    p.add_argument("--params", required=True)
    p.add_argument("--grid", type=_grid, default=analysis.DEFAULT_GRID)
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--threads", type=int, default=1)

    p = add("table", cmd_table, "upper-boundary deviations at t0 for a depth range")
    p.add_argument("--base", type=int, choices=(2, 3), required=True)
    p.add_argument("--p-range", type=_p_range, required=True, help="a..b")
    p.add_argument("--t0", type=float, default=analysis.T0)
    p.add_argument("--threads", type=int, default=1)

    p = add("bench", cmd_bench, "time p_approx against p_exact")
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=float, default=1e7)
    p.add_argument("--seed", type=int, default=0)

    p = add("continuum", cmd_continuum, "continuum-limit integral and truncated series")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--series", type=int)

    p = add("compare", cmd_compare, "exact value next to the classical approximations")
    p.add_argument("--t", type=_t_values, default=_t_values("0:4:0.25"))
    p.add_argument("--params")

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        if getattr(args, "params", None) is not None:
            args.params = _params(args.params)
        args.func(args)
    except (ContractError, DomainError, NoSolution) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
