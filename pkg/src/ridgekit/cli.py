"""Command-line front end: machine-readable JSON/CSV access to every module.

Exit codes: 0 success, 1 domain error (a representation obstruction, a
violated class hypothesis, ...), 2 usage error.
"""

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .core import (
    DirectionSet,
    PointConfig,
    _read_csv_rows,
    parse_expression,
    rational,
)
from .cycles import (
    CycleExists,
    closed_path_search,
    has_cycle,
    minimal_cycles,
    orbits,
    solve_representation,
    tau_closure,
)
from .uniform import (
    HypothesisViolated,
    ParallelogramDomain,
    best_uniform,
    diliberto_straus,
    verify_extremal,
)
from .l2 import NotAnRSet, best_l2, build_rset
from .bolts import (
    AxisRect,
    ClassViolated,
    Hexagon,
    Octagon,
    StairPolygon,
    golomb_lower_bound,
    hexagon_error,
    octagon_error,
    sharp_bounds,
    stairlike_error,
    uc_best,
    vc_best,
)
from .smooth import DecompProblem, crosscheck_highorder, decompose, tabulate
from .sigmoid import SigmoidParams, fit_two_neuron, sigma

DOMAIN_ERRORS = (
    CycleExists,
    ClassViolated,
    HypothesisViolated,
    NotAnRSet,
    ArithmeticError,
    ValueError,
)


# ---------------------------------------------------------------------------
# serialization helpers

def _frac(v):
    f = Fraction(v)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _table(tab, stride=1):
    return {
        "knots": [float(t) for t in tab.knots[::stride]],
        "values": [float(v) for v in tab.values[::stride]],
    }


def _sample(fn, lo, hi, n=201):
    ts = np.linspace(float(lo), float(hi), n)
    return {"knots": [float(t) for t in ts],
            "values": [float(fn(t)) for t in ts]}


def _digest(args, files):
    h = hashlib.sha256()
    flags = sorted((k, v) for k, v in vars(args).items()
                   if k not in ("func", "_argv"))
    h.update(repr(flags).encode())
    for path in files:
        if path and os.path.exists(path):
            with open(path, "rb") as fh:
                h.update(fh.read())
    return h.hexdigest()[:16]


def _emit(args, results, files=(), t0=None):
    report = {
        "schema": 1,
        "version": __version__,
        "command": " ".join(args._argv),
        "inputs_digest": _digest(args, files),
        "results": results,
        "timing_seconds": round(time.perf_counter() - t0, 6) if t0 else None,
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def _read_points(path):
    rows = _read_csv_rows(path)
    dim = len(rows[0])
    return PointConfig(dim, rows)


def _read_dirs(path, dim):
    rows = _read_csv_rows(path)
    return DirectionSet(dim, rows)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_cycles_check(args, t0):
    points = _read_points(args.points)
    dirs = _read_dirs(args.directions, points.dim)
    h = list(dirs)
    found, cert = has_cycle(points, h, certificate=True)
    results = {"has_cycle": found, "certificates": []}
    if cert is not None:
        results["certificates"].append({
            "support": cert.support,
            "weights": cert.weights,
        })
    if args.minimal:
        certs, exhausted = minimal_cycles(points, h, cap=args.cap)
        results["certificates"] = [
            {"support": c.support, "weights": c.weights} for c in certs
        ]
        results["minimal_exhausted"] = exhausted
    if args.tau:
        trace, fixed = tau_closure(points, h)
        results["tau_trace"] = trace
        results["tau_fixed_point"] = fixed
        if len(h) == 2:
            results["orbits"] = orbits(points, h[0], h[1])
            path = closed_path_search(points, h[0], h[1])
            results["closed_path"] = path
    if args.solve:
        fvals = [row[0] for row in _read_csv_rows(args.solve)]
        tables, free = solve_representation(points, h, fvals, anchor=args.anchor)
        results["representation"] = {
            "free_unknowns": free,
            "tables": [
                {_frac(k): _frac(v) for k, v in sorted(tab.items())}
                for tab in tables
            ],
        }
    files = [args.points, args.directions, args.solve]
    return _emit(args, results, files, t0)


def _cmd_approx_uniform(args, t0):
    f = parse_expression(args.expr, 2)
    a = tuple(args.dirs[:2])
    b = tuple(args.dirs[2:])
    c1, d1, c2, d2 = args.bounds
    dom = ParallelogramDomain(a, b, c1, d1, c2, d2)
    try:
        pair = best_uniform(f, dom, check=True)
        results = {
            "error": pair.error,
            "method": "closed form",
            "g1_table": _sample(pair.g1, dom.c1, dom.d1),
            "g2_table": _sample(pair.g2, dom.c2, dom.d2),
        }
        if args.verify:
            rep = verify_extremal(f, pair, dom)
            results["witness_path"] = rep.get("witness")
            results["verified"] = rep["verdict"]
    except HypothesisViolated:
        from .core import grid_minimax_oracle
        n = 41
        y1 = np.linspace(dom.c1, dom.d1, n)
        y2 = np.linspace(dom.c2, dom.d2, n)
        Y1, Y2 = np.meshgrid(y1, y2, indexing="ij")
        X, Y = dom.to_xy(Y1, Y2)
        pts = np.column_stack([X.ravel(), Y.ravel()])
        err = grid_minimax_oracle(f, [a, b], pts)
        results = {"error": float(err), "method": "numerical (no closed form)"}
    if args.ds_iters:
        norms, tables = diliberto_straus(f, dom, iters=args.ds_iters)
        results["ds_norms"] = [float(v) for v in norms]
        results["ds_g1_table"] = _table(tables[0])
        results["ds_g2_table"] = _table(tables[1])
    return _emit(args, results, (), t0)


def _cmd_approx_l2(args, t0):
    dirs = _read_csv_rows(args.dirs_file)
    comp = []
    if args.completion_file and os.path.getsize(args.completion_file):
        comp = _read_csv_rows(args.completion_file)
    with open(args.ybox) as fh:
        ybox = json.load(fh)
    ybox = [tuple(b) for b in ybox]
    n = len(dirs[0])
    f = parse_expression(args.expr, n)
    t = build_rset(dirs, comp, ybox)
    weights = None
    if args.weights:
        weights = [parse_expression(w, n) for w in args.weights]
    sol = best_l2(f, t, weights=weights, nodes=args.nodes)
    results = {
        "error": sol.error,
        "components": [_table(g) for g in sol.components],
        "diagnostics": {
            k: (float(v) if np.isscalar(v) else v)
            for k, v in sol.diagnostics.items()
            if np.isscalar(v)
        },
    }
    files = [args.dirs_file, args.completion_file, args.ybox]
    return _emit(args, results, files, t0)


def _cmd_bolts(args, t0):
    with open(args.geom) as fh:
        geom = json.load(fh)
    n = 2
    f = parse_expression(args.expr, n)
    results = {}
    if args.shape == "rect":
        R = AxisRect(*geom["rect"])
        if args.cls is None:
            raise ValueError("rect requires --class V|U and --c")
        fn = vc_best if args.cls == "V" else uc_best
        err, phi0, psi0, y0 = fn(f, R, args.c, check=True)
        results.update({
            "error": float(err),
            "y0": float(y0),
            "extremal": {
                "phi0_table": _table(phi0.table),
                "psi0_table": _table(psi0.table),
            },
        })
    else:
        if args.shape == "hexagon":
            P = Hexagon(geom["a"], geom["b"])
            rep = hexagon_error(f, P)
        elif args.shape in ("octagonA", "octagonB"):
            P = Octagon(geom["a"], geom["b"], args.shape[-1])
            rep = octagon_error(f, P)
        else:
            P = StairPolygon(geom["a"], geom["b"])
            rep = stairlike_error(f, P)
        from .bolts import ebolts
        results.update({
            "error": float(rep["error"]),
            "bolts": [
                {"points": [[float(p[0]), float(p[1])] for p in b.points],
                 "value": float(v)}
                for b, v in zip(ebolts(P), rep["values"])
            ],
            "fallback": bool(rep.get("fallback", False)),
        })
        if rep.get("bolt") is not None:
            results["extremal_bolt"] = [[float(p[0]), float(p[1])]
                                        for p in rep["bolt"].points]
        if args.bounds and args.shape == "hexagon":
            bd = sharp_bounds(f, P)
            results["bounds"] = {
                "lower": float(bd["lower"]),
                "upper": float(bd["upper"]),
            }
    if args.golomb:
        pts = _read_csv_rows(args.golomb)
        results["golomb_lower_bound"] = float(golomb_lower_bound(f, pts))
    return _emit(args, results, [args.geom, args.golomb], t0)


def _cmd_smooth(args, t0):
    dirs = [tuple(float(v) for v in row) for row in _read_csv_rows(args.dirs)]
    f = parse_expression(args.expr, 2)
    box = ((args.box[0], args.box[1]), (args.box[2], args.box[3]))
    problem = DecompProblem(f, dirs, box, order=args.order)
    result = decompose(problem)
    tables = tabulate(result, problem)
    results = {
        "residual": result.residual,
        "g_tables": [_table(t, stride=4) for t in tables],
    }
    if args.crosscheck:
        check = crosscheck_highorder(problem)
        results["convergence_study"] = {"residual": check.residual}
    return _emit(args, results, [args.dirs], t0)


def _cmd_sigmoid_eval(args, t0):
    params = SigmoidParams(args.d, args.lam)
    vals = [float(sigma(x, params)) for x in args.x]
    results = {"sigma": vals[0] if len(vals) == 1 else vals}
    return _emit(args, results, (), t0)


def _cmd_sigmoid_table(args, t0):
    params = SigmoidParams(args.d, args.lam)
    xs = np.arange(args.start, args.stop + 1e-12, args.step)
    print("x,sigma")
    for x in xs:
        print(f"{float(x):g},{float(sigma(float(x), params)):.5f}")
    return 0


def _cmd_sigmoid_fit(args, t0):
    f = parse_expression(args.expr, 1)
    a, b = args.interval
    net, achieved = fit_two_neuron(f, a, b, args.eps)
    results = {
        "c1": float(net.c1),
        "c2": float(net.c2),
        "n": str(net.n),
        "theta1": {
            "decimal": net.theta1_decimal(),
            "exact": _frac(net.theta1_exact),
        } if net.theta1_exact.denominator == 1 and
             abs(net.theta1_log10()) < 4000 else {
            "decimal": net.theta1_decimal(),
            "exact": None,
        },
        "theta2": _frac(net.theta2),
        "achieved_error": float(achieved),
    }
    return _emit(args, results, (), t0)


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    p = argparse.ArgumentParser(
        prog="ridgekit",
        description="Ridge-function approximation toolkit",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("cycles", help="representability tests")
    csub = pc.add_subparsers(dest="subcommand", required=True)
    cc = csub.add_parser("check", help="cycle detection and representation")
    cc.add_argument("--points", required=True)
    cc.add_argument("--directions", required=True)
    cc.add_argument("--minimal", action="store_true")
    cc.add_argument("--cap", type=int, default=10)
    cc.add_argument("--tau", action="store_true")
    cc.add_argument("--solve", default=None)
    cc.add_argument("--anchor", type=int, default=0)
    cc.set_defaults(func=_cmd_cycles_check)

    pa = sub.add_parser("approx", help="best approximations")
    asub = pa.add_subparsers(dest="subcommand", required=True)
    au = asub.add_parser("uniform", help="uniform-norm best ridge pair")
    au.add_argument("--expr", required=True)
    au.add_argument("--dirs", nargs=4, type=float, required=True,
                    metavar=("A1X", "A1Y", "B1X", "B1Y"))
    au.add_argument("--bounds", nargs=4, type=float, required=True,
                    metavar=("C1", "D1", "C2", "D2"))
    au.add_argument("--verify", action="store_true")
    au.add_argument("--ds-iters", type=int, default=0)
    au.set_defaults(func=_cmd_approx_uniform)
    al = asub.add_parser("l2", help="L2-norm best ridge sum")
    al.add_argument("--expr", required=True)
    al.add_argument("--dirs-file", required=True)
    al.add_argument("--completion-file", default=None)
    al.add_argument("--ybox", required=True)
    al.add_argument("--weights", nargs="+", default=None)
    al.add_argument("--nodes", type=int, default=24)
    al.set_defaults(func=_cmd_approx_l2)

    pb = sub.add_parser("bolts", help="bolt-based error formulas")
    bsub = pb.add_subparsers(dest="shape", required=True)
    for shape in ("rect", "hexagon", "octagonA", "octagonB", "stairs"):
        bp = bsub.add_parser(shape)
        bp.add_argument("--expr", required=True)
        bp.add_argument("--geom", required=True)
        bp.add_argument("--class", dest="cls", choices=("V", "U"), default=None)
        bp.add_argument("--c", type=float, default=0.0)
        bp.add_argument("--bounds", action="store_true")
        bp.add_argument("--golomb", default=None)
        bp.set_defaults(func=_cmd_bolts)

    ps = sub.add_parser("smooth", help="smooth ridge decompositions")
    ssub = ps.add_subparsers(dest="subcommand", required=True)
    sd = ssub.add_parser("decompose")
    sd.add_argument("--expr", required=True)
    sd.add_argument("--dirs", required=True)
    sd.add_argument("--order", type=int, default=None)
    sd.add_argument("--box", nargs=4, type=float, required=True,
                    metavar=("X0", "X1", "Y0", "Y1"))
    sd.add_argument("--crosscheck", action="store_true")
    sd.set_defaults(func=_cmd_smooth)

    pg = sub.add_parser("sigmoid", help="universal sigmoidal activation")
    gsub = pg.add_subparsers(dest="subcommand", required=True)
    ge = gsub.add_parser("eval")
    ge.add_argument("--d", type=float, required=True)
    ge.add_argument("--lambda", dest="lam", type=float, required=True)
    ge.add_argument("--x", type=float, nargs="+", required=True)
    ge.set_defaults(func=_cmd_sigmoid_eval)
    gt = gsub.add_parser("table")
    gt.add_argument("--d", type=float, required=True)
    gt.add_argument("--lambda", dest="lam", type=float, required=True)
    gt.add_argument("--from", dest="start", type=float, required=True)
    gt.add_argument("--to", dest="stop", type=float, required=True)
    gt.add_argument("--step", type=float, required=True)
    gt.set_defaults(func=_cmd_sigmoid_table)
    gf = gsub.add_parser("fit")
    gf.add_argument("--expr", required=True)
    gf.add_argument("--interval", nargs=2, type=float, required=True,
                    metavar=("A", "B"))
    gf.add_argument("--eps", type=float, required=True)
    gf.set_defaults(func=_cmd_sigmoid_fit)
    return p


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    threads = os.environ.get("RIDGEKIT_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._argv = ["ridgekit"] + argv
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except DOMAIN_ERRORS as exc:
        report = {
            "schema": 1,
            "version": __version__,
            "command": " ".join(args._argv),
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        print(json.dumps(report, sort_keys=True, indent=2))
        return 1


if __name__ == "__main__":
    sys.exit(main())
