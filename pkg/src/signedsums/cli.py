"""Command-line interface: ``signedsums {gen,solve,bounds,minimax,table}``.

Exit codes: 0 success, 2 precondition violation, 3 budget exceeded,
4 I/O failure. Indices are printed 1-based.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import bounds as bd
from .configio import ConfigFormatError, ResultRow, dumps_text, load_config, save_config, write_rows
from .exact import BudgetExceeded, max_over_selections, max_over_selections_planar
from .generators import KINDS, GeneratorSpec, generate
from .heuristics import bang_ascent, cap_greedy_selection
from .minimax import SearchSettings, estimate_c

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_IO = 4

SOLVERS = ("exact", "planar", "bang", "cap-greedy")
BOUND_METHODS = ("trivial_upper", "sqrt_k_lower", "averaging_lower", "general_lower",
                 "welch_pair_lower", "planar_lower", "bounds")

log = logging.getLogger("signedsums")


class _IOFailure(Exception):
    pass


def _spec_from_args(args) -> GeneratorSpec:
    kind = "polygon-multiplicity" if args.kind == "polygon" else args.kind
    return GeneratorSpec(kind=kind, d=args.d, n=args.n, seed=args.seed, delta=args.delta,
                         k=args.k, m=args.m, h=args.h)


def cmd_gen(args) -> int:
    spec = _spec_from_args(args)
    cfg = generate(spec)
    meta = spec.metadata()
    if args.output:
        try:
            save_config(args.output, cfg, meta)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
    else:
        sys.stdout.write(dumps_text(cfg, meta))
    return EXIT_OK


def solve(cfg, k: int, method: str, seed: int = 0):
    """Run one solver; returns (SolveResult, extra-dict)."""
    if method == "exact":
        return max_over_selections(cfg, k), {}
    if method == "planar":
        return max_over_selections_planar(cfg, k), {}
    if method == "bang":
        if k != cfg.n:
            raise ValueError(f"bang chooses signs for all vectors; needs k = n = {cfg.n}, got k = {k}")
        res, cert = bang_ascent(cfg, seed=seed)
        return res, {"min_margin": cert.min_margin, "margins": cert.margins.tolist()}
    if method == "cap-greedy":
        res, info = cap_greedy_selection(cfg, k, return_info=True)
        return res, {"cap_radius": info.radius, "cap_count": info.count, "guaranteed": info.guaranteed}
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(SOLVERS)}")


def cmd_solve(args) -> int:
    try:
        cfg, _ = load_config(args.config)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    k = args.k if args.k is not None else cfg.n
    res, extra = solve(cfg, k, args.method, args.seed)
    sel = res.selection
    doc = {
        "d": cfg.dim, "n": cfg.n, "k": k, "method": args.method,
        "value": res.value,
        "indices": [i + 1 for i in sel.indices],
        "signs": list(sel.signs),
        "sum": [float(x) for x in res.sum],
        "certificate": res.certificate,
        **extra,
    }
    if args.json:
        print(json.dumps(doc))
    else:
        print(f"value       {res.value:.17g}")
        print(f"indices     {' '.join(str(i) for i in doc['indices'])}")
        print(f"signs       {' '.join('+' if s > 0 else '-' for s in sel.signs)}")
        print(f"certificate {res.certificate}")
        for key, val in extra.items():
            if key != "margins":
                print(f"{key:<11} {val}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    reports = bd.applicable_bounds(args.d, args.n, args.k)
    if args.json:
        print(json.dumps([r.__dict__ for r in reports]))
        return EXIT_OK
    print(f"{'name':<20} {'side':<6} {'value':>20}  {'validity':<16} notes")
    for r in reports:
        notes = [r.anchor]
        if r.sharp:
            notes.append("sharp")
        if r.condition:
            notes.append(f"only if {r.condition}")
        if not r.applicable:
            notes.append("hypothesis on k not met")
        print(f"{r.name:<20} {r.side:<6} {r.value:>20.12g}  {r.validity:<16} {'; '.join(notes)}")
    return EXIT_OK


def _settings(args) -> SearchSettings:
    return SearchSettings(restarts=args.restarts, max_iters=args.iters, seed=args.seed, inner=args.inner)


def cmd_minimax(args) -> int:
    t0 = time.perf_counter()
    est = estimate_c(args.d, args.n, args.k, _settings(args))
    ms = 1000.0 * (time.perf_counter() - t0)
    print(f"value       {est.value:.17g}  (upper estimate of c({args.d},{args.n},{args.k}))")
    print(f"inner       {est.inner_solver}")
    print(f"start       {est.start_label}")
    print(f"iterations  {est.iterations}")
    try:
        if args.output:
            write_rows(args.output, [ResultRow(args.d, args.n, args.k, "minimax", est.value, args.seed,
                                               est.iterations, ms, f"upper-estimate:{est.inner_solver}")],
                       append=True)
        if args.save_config:
            save_config(args.save_config, est.best_config,
                        {"kind": "minimax", "d": args.d, "n": args.n, "k": args.k, "seed": args.seed,
                         "value": format(est.value, ".17g")})
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    return EXIT_OK


def parse_range(text: str) -> list[int]:
    """'2..6' -> [2..6], '2,4,5' -> [2, 4, 5], '3' -> [3]."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _table_row(d, n, k, method, args) -> ResultRow:
    t0 = time.perf_counter()
    seed = args.seed
    if method in SOLVERS:
        spec = GeneratorSpec(kind=args.kind, d=d, n=n, seed=seed, k=k)
        cfg = generate(spec)
        res, _ = solve(cfg, k, method, seed)
        return ResultRow(d, n, k, method, res.value, seed, res.evaluated,
                         1000.0 * (time.perf_counter() - t0), res.certificate or "")
    if method == "minimax":
        settings = SearchSettings(restarts=args.restarts, max_iters=args.iters, seed=seed)
        est = estimate_c(d, n, k, settings)
        return ResultRow(d, n, k, method, est.value, seed, est.iterations,
                         1000.0 * (time.perf_counter() - t0), f"upper-estimate:{est.inner_solver}")
    if method == "bounds":
        rep = bd.best_exact_lower(d, n, k)
        return ResultRow(d, n, k, f"best_lower:{rep.name}", rep.value, seed, 0,
                         1000.0 * (time.perf_counter() - t0), rep.validity)
    reps = {r.name: r for r in bd.applicable_bounds(d, n, k)}
    if method not in reps:
        raise ValueError(f"bound {method} does not apply to d={d}, n={n}, k={k}")
    rep = reps[method]
    return ResultRow(d, n, k, method, rep.value, seed, 0, 1000.0 * (time.perf_counter() - t0), rep.validity)


def cmd_table(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in SOLVERS + BOUND_METHODS + ("minimax",)]
    if unknown:
        raise ValueError(f"unknown methods: {', '.join(unknown)}")
    rows = []
    for d in parse_range(args.d_range):
        for n in parse_range(args.n_range):
            for k in parse_range(args.k_range):
                for method in methods:
                    try:
                        rows.append(_table_row(d, n, k, method, args))
                    except (ValueError, BudgetExceeded) as exc:
                        rows.append(ResultRow(d, n, k, method, "", args.seed, 0, 0.0, f"error: {exc}"))
    try:
        if args.output:
            write_rows(args.output, rows)
        else:
            write_rows("/dev/stdout", rows)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedsums",
                                description="Extremal signed k-term sums of unit vectors.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a configuration file")
    g.add_argument("--kind", required=True, choices=KINDS + ("polygon",))
    g.add_argument("--d", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--m", type=int, help="copies per basis vector (orthonormal-copies)")
    g.add_argument("--h", type=int, help="even simplex dimension (simplex-plus-orthonormal)")
    g.add_argument("--delta", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="best signed k-sum of a configuration file")
    s.add_argument("--config", required=True)
    s.add_argument("--k", type=int, help="selection size (default n)")
    s.add_argument("--method", default="exact", choices=SOLVERS)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="closed-form bounds for (d, n, k)")
    for name in ("--d", "--n", "--k"):
        b.add_argument(name, type=int, required=True)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("minimax", help="upper-estimate c(d, n, k) by descent")
    for name in ("--d", "--n", "--k"):
        m.add_argument(name, type=int, required=True)
    m.add_argument("--restarts", type=int, default=16)
    m.add_argument("--iters", type=int, default=2000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--inner", default="auto", choices=("auto", "exact", "planar", "bang-multistart"))
    m.add_argument("-o", "--output", help="CSV file to append the result row to")
    m.add_argument("--save-config", help="write the best configuration here")
    m.set_defaults(func=cmd_minimax)

    t = sub.add_parser("table", help="CSV table over parameter ranges")
    t.add_argument("--d-range", required=True)
    t.add_argument("--n-range", required=True)
    t.add_argument("--k-range", required=True)
    t.add_argument("--methods", default="exact,bounds")
    t.add_argument("--kind", default="random-uniform", help="generator used for solver rows")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--restarts", type=int, default=4)
    t.add_argument("--iters", type=int, default=500)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}; try --method bang (k = n) or cap-greedy, or planar when d = 2", file=sys.stderr)
        return EXIT_BUDGET
    except (_IOFailure, ConfigFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
