"""Command-line front end.

Results go to stdout as JSON (fixed key order, integers as decimal strings)
or DOT; progress goes to stderr. Exit codes: 0 ok, 2 bad input, 3 failed
internal invariant.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import cycle_param as cp
from .config import RunConfig, load_config
from .cubic_field import elements_of_norm, norm_representatives
from .exact_arith import (
    InputError,
    InvariantViolation,
    ParamPair,
    beta_orbit,
    int_str,
    parse_int,
    parse_rat,
    rat_str,
)
from .gamma_graph import component_of, export, special_vertex
from .padic_dynamics import allowed_periods, cycles_mod_p, exclude_periods, nbound_table, table2
from .thue_solver import certify_seed, scan_conjecture1, solve_A, solve_t1, zero_scan


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _pair(args) -> ParamPair:
    return ParamPair(parse_int(args.m), parse_int(args.n))


def _factors_json(fac: dict[int, int]) -> dict[str, str]:
    return {int_str(q): int_str(e) for q, e in sorted(fac.items())}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_param(args, cfg: RunConfig) -> None:
    _emit(cp.cycle_record(_pair(args)))


def cmd_cycle(args, cfg: RunConfig) -> None:
    p = _pair(args)
    rec = cp.cycle_record(p)
    rec["beta_orbit"] = [q.to_json() for q in beta_orbit(p)]
    rec["dynamical_unit"] = rat_str(cp.dynamical_unit(p))
    _emit(rec)


def cmd_thue(args, cfg: RunConfig) -> None:
    a = parse_int(args.a)
    _emit(solve_t1(a, window=cfg.window, prime_limit=cfg.mt_prime_limit).to_json())


def cmd_solve_a(args, cfg: RunConfig) -> None:
    k = parse_int(args.k)
    sols = solve_A(k)
    _emit({"k": int_str(k), "solutions": [p.to_json() for p in sols], "count": len(sols)})


def cmd_scan_c1(args, cfg: RunConfig) -> None:
    kmax = parse_int(args.kmax) if args.kmax is not None else cfg.scan_kmax
    if kmax < 1:
        raise InputError("kmax must be positive")
    rep = scan_conjecture1(kmax, progress=_progress, workers=cfg.workers)
    for k in rep.counterexamples:
        _progress(f"scan-c1: COUNTEREXAMPLE k = {k} has {len(rep.solved[k])} solutions")
    _emit(rep.to_json())


def cmd_graph(args, cfg: RunConfig) -> None:
    if args.graph_cmd == "component":
        report, g = component_of(parse_int(args.root), max_vertices=cfg.max_vertices,
                                 max_bits=cfg.max_bits, window=cfg.window,
                                 prime_limit=cfg.mt_prime_limit, progress=_progress)
        if cfg.format == "dot":
            sys.stdout.write(export(g, "dot"))
        else:
            doc = json.loads(export(g, "json", root=report.root, status=report.status))
            doc["report"] = report.to_json()
            _emit(doc)
    else:
        sv = special_vertex(parse_int(args.x), parse_int(args.y))
        _emit({"x": int_str(sv.x), "y": int_str(sv.y), "a": int_str(sv.a),
               "pairs": [p.to_json() for p in sv.pairs]})


def cmd_classify(args, cfg: RunConfig) -> None:
    p = _pair(args)
    if args.what == "c":
        r = cp.classify_A(p)
        _emit({"m": int_str(p.m), "n": int_str(p.n), "A": int_str(r["A"]),
               "factors": _factors_json(r["factors"]),
               "seven_exponent": r["seven_exponent"],
               "cofactor_mod_14": int_str(r["cofactor_mod_14"]),
               "primes_1_mod_7": r["primes_1_mod_7"], "conforms": r["conforms"]})
    else:
        r = cp.classify_t(p)
        out = {"m": int_str(p.m), "n": int_str(p.n)}
        for key in ("t1", "t2", "t3"):
            out[key] = {"value": int_str(r[key]["value"]),
                        "factors": _factors_json(r[key]["factors"]),
                        "classes": {int_str(q): c for q, c in sorted(r[key]["classes"].items())}}
        out["conforms"] = r["conforms"]
        _emit(out)


def cmd_padic(args, cfg: RunConfig) -> None:
    sub = args.padic_cmd
    if sub == "cycles":
        p = parse_int(args.p)
        c = parse_rat(args.c)
        pc = allowed_periods(p, c, args.rule)
        _emit(pc.to_json())
    elif sub == "exclude":
        primes = [parse_int(t) for t in args.primes.split(",") if t.strip()]
        v = exclude_periods(_pair(args), primes, assume_poonen=not args.no_poonen,
                            assume_no_4_5=args.no_4_5, rule=args.rule)
        _emit(v.to_json())
    elif sub == "table2":
        rows = table2(parse_int(args.p))
        _emit([{"c": int_str(r["c"]), "cycle": [int_str(x) for x in r["cycle"]],
                "mu": int_str(r["mu"]), "r": str(r["r"]), "n": [int_str(n) for n in r["n"]]}
               for r in rows])
    else:
        rows = nbound_table(parse_int(args.pmax))
        _emit({"all_hold": all(r.holds for r in rows),
               "equality": [int_str(r.p) for r in rows if r.equality],
               "strict": [int_str(r.p) for r in rows if not r.equality],
               "rows": [r.to_json() for r in rows]})


def cmd_certify(args, cfg: RunConfig) -> None:
    a = parse_int(args.norm)
    if a <= 0:
        raise InputError("norm must be positive")
    out = []
    for rep in norm_representatives(a):
        scan = zero_scan(rep.generator, cfg.window)
        cert = certify_seed(rep.generator, [-k for k in scan.zeros], cfg.mt_prime_limit)
        out.append({"seed": rep.generator.to_json(), "zeros": [int_str(k) for k in scan.zeros],
                    "growth": scan.growth,
                    "certificate": None if cert is None else cert.to_json()})
    _emit({"norm": int_str(a), "representatives": out})


def cmd_elements(args, cfg: RunConfig) -> None:
    nc = elements_of_norm(parse_int(args.norm), box=cfg.box or None, k_assoc=cfg.k_assoc)
    _emit(nc.to_json())


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="threecycle",
                                 description="Rational 3-cycles of x^2 + c: exact tools.")
    ap.add_argument("--config", help="key=value config file (default: $THREECYCLE_CONFIG)")
    ap.add_argument("--window", type=int)
    ap.add_argument("--box", type=int)
    ap.add_argument("--k-assoc", dest="k_assoc", type=int)
    ap.add_argument("--mt-prime-limit", dest="mt_prime_limit", type=int)
    ap.add_argument("--workers", type=int)
    sp = ap.add_subparsers(dest="cmd", required=True)

    for name, fn, hlp in (("param", cmd_param, "c and the 3-cycle for a pair"),
                          ("cycle", cmd_cycle, "cycle record plus the beta orbit")):
        p = sp.add_parser(name, help=hlp)
        p.add_argument("m")
        p.add_argument("n")
        p.set_defaults(func=fn)

    p = sp.add_parser("thue", help="solve t1(m, n) = a")
    p.add_argument("a")
    p.set_defaults(func=cmd_thue)

    p = sp.add_parser("solve-a", help="solve A(m, n) = k")
    p.add_argument("k")
    p.set_defaults(func=cmd_solve_a)

    p = sp.add_parser("scan-c1", help="count solutions of A(m, n) = k for all k <= kmax")
    p.add_argument("--kmax")
    p.set_defaults(func=cmd_scan_c1)

    p = sp.add_parser("graph", help="numerator graph")
    gsp = p.add_subparsers(dest="graph_cmd", required=True)
    g = gsp.add_parser("component")
    g.add_argument("--root", required=True)
    g.add_argument("--max-vertices", dest="max_vertices", type=int)
    g.add_argument("--max-bits", dest="max_bits", type=int)
    g.add_argument("--format", choices=("json", "dot"))
    g = gsp.add_parser("special")
    g.add_argument("--x", required=True)
    g.add_argument("--y", required=True)
    p.set_defaults(func=cmd_graph)

    p = sp.add_parser("classify", help="prime classes of A or of t1, t2, t3")
    p.add_argument("what", choices=("c", "t"))
    p.add_argument("m")
    p.add_argument("n")
    p.set_defaults(func=cmd_classify)

    p = sp.add_parser("padic", help="cycles mod p and period exclusion")
    psp = p.add_subparsers(dest="padic_cmd", required=True)
    q = psp.add_parser("cycles")
    q.add_argument("--p", required=True)
    q.add_argument("--c", required=True, help="residue or rational; write --c=-29/16 for negatives")
    q.add_argument("--rule", choices=("ms", "pezda", "auto"), default="ms")
    q = psp.add_parser("exclude")
    q.add_argument("--m", required=True)
    q.add_argument("--n", required=True)
    q.add_argument("--primes", required=True)
    q.add_argument("--no-poonen", action="store_true")
    q.add_argument("--no-4-5", dest="no_4_5", action="store_true",
                   help="also drop periods 4 and 5")
    q.add_argument("--rule", choices=("ms", "pezda", "auto"), default="auto")
    q = psp.add_parser("table2")
    q.add_argument("--p", default="29")
    q = psp.add_parser("nbound")
    q.add_argument("--pmax", default="500")
    p.set_defaults(func=cmd_padic)

    p = sp.add_parser("certify", help="Mignotte-Tzanakis certificates for each class of norm a")
    p.add_argument("--norm", required=True)
    p.set_defaults(func=cmd_certify)

    p = sp.add_parser("elements", help="box search for elements of norm +-a")
    p.add_argument("--norm", required=True)
    p.set_defaults(func=cmd_elements)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, window=args.window, box=args.box, k_assoc=args.k_assoc,
                          mt_prime_limit=args.mt_prime_limit, workers=args.workers,
                          max_vertices=getattr(args, "max_vertices", None),
                          max_bits=getattr(args, "max_bits", None),
                          format=getattr(args, "format", None))
        args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
