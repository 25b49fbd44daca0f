"""Command line front end: ``wproj <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 a check found a violation, 3 crash.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, kernels
from .counting import (
    audit_antecedent,
    audit_identities,
    audit_lesZi,
    audit_mondo,
    audit_preimage,
    bounds,
    count_zeros,
    unscrew,
)
from .errors import UsageError
from .gf import field_from_q
from .reproduce import SUITES, format_table, run_suite
from .search import EXHAUSTIVE_BUDGET, ResultCache, candidate_count, eq_exhaustive, eq_random
from .wpoly import monomial_basis, parse_poly
from .wps import as_weights, pn, point_set

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CRASH = 0, 1, 2, 3

POLY_PROPS = ("identities", "mondo", "preimage", "unscrew")
SPACE_PROPS = ("lesZi", "antecedent")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _weights(text: str):
    try:
        return as_weights(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"weights must be a comma list of positive integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1)

    space = _Parser(add_help=False)
    space.add_argument("--q", required=True, help="field size, p or p^k")
    space.add_argument("--weights", required=True, help="a0,a1,...")

    parser = _Parser(prog="wproj", description="Rational points on weighted projective hypersurfaces.")
    parser.add_argument("--version", action="version", version=f"wproj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("points", parents=[common, space], help="list rational points")

    p = sub.add_parser("count", parents=[common, space], help="count zeros of a polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--degree", type=int)

    p = sub.add_parser("bounds", parents=[common, space], help="p_n, Serre, conjecture and lower bounds")
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("audit", parents=[common, space], help="audit the partition identities")
    p.add_argument("--prop", required=True, choices=SPACE_PROPS + POLY_PROPS)
    p.add_argument("--poly")
    p.add_argument("--index", type=int, help="coordinate index i (default: all)")

    p = sub.add_parser("eq", parents=[common, space], help="compute e_q(d; W)")
    p.add_argument("--degree", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", action="store_true")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=EXHAUSTIVE_BUDGET)
    p.add_argument("--cache")

    p = sub.add_parser("unscrew", parents=[common, space], help="pull back down to straight weights")
    p.add_argument("--poly", required=True)

    p = sub.add_parser("reproduce", parents=[common], help="run an acceptance experiment")
    p.add_argument("suite", choices=sorted(SUITES))
    return parser


def _check(name, ok, lhs=None, rhs=None, witnesses=()):
    return {"name": name, "pass": bool(ok), "lhs": lhs, "rhs": rhs, "witnesses": list(witnesses)}


def _space_config(args):
    F = field_from_q(args.q)
    W = _weights(args.weights)
    desc = F.describe()
    desc["delta"] = F.format_element(F.delta)
    return F, W, {"field": desc, "weights": list(W.weights)}


def _poly(args, F, W):
    f = parse_poly(args.poly, W, F)
    if getattr(args, "degree", None) is not None and args.degree != f.degree:
        raise UsageError(f"--degree {args.degree} does not match the polynomial's weighted degree {f.degree}")
    return f


def cmd_points(args):
    F, W, cfg = _space_config(args)
    ps = point_set(W, F)
    expected = pn(W.n, F.q)
    pts = [str(P) for P in ps.points]
    text = pts + [f"p_{W.n} = {expected}: " + ("OK" if len(pts) == expected else f"MISMATCH ({len(pts)} points)")]
    return cfg, {"count": len(pts), "points": pts}, [_check("p_n", len(pts) == expected, len(pts), expected)], text


def cmd_count(args):
    F, W, cfg = _space_config(args)
    f = _poly(args, F, W)
    cfg.update(poly=str(f), degree=f.degree)
    N = count_zeros(f)
    b = bounds(f.degree, W, F)
    results = {"N": N, "bounds": b.as_dict()}
    checks = [_check("at_most_pn", N <= b.pn, N, b.pn)]
    if f.degree <= F.q + 1:
        checks.append(_check("serre", N <= b.serre, N, b.serre))
    text = [f"N = {N}", f"serre = {b.serre}", f"conjecture = {b.conjecture}", f"lower = {b.lower}",
            f"p_n = {b.pn}"] + [f"note: {x}" for x in b.notes]
    return cfg, results, checks, text


def cmd_bounds(args):
    F, W, cfg = _space_config(args)
    cfg["degree"] = args.degree
    b = bounds(args.degree, W, F)
    text = [f"p_n = {b.pn}", f"serre = {b.serre}", f"conjecture = {b.conjecture}", f"lower = {b.lower}"]
    return cfg, b.as_dict(), [], text + [f"note: {x}" for x in b.notes]


def cmd_audit(args):
    F, W, cfg = _space_config(args)
    cfg["prop"] = args.prop
    f = None
    if args.prop in POLY_PROPS:
        if args.poly is None:
            raise UsageError(f"--prop {args.prop} needs --poly")
        f = _poly(args, F, W)
        cfg["poly"] = str(f)
    if args.index is not None and not 0 <= args.index < len(W):
        raise UsageError(f"--index must be in 0..{W.n}, got {args.index}")
    if args.prop == "unscrew":
        reports = [unscrew(f)[1]]
    else:
        indices = range(len(W)) if args.index is None else [args.index]
        cfg["index"] = args.index
        run = {
            "lesZi": lambda i: audit_lesZi(W, F, i),
            "antecedent": lambda i: audit_antecedent(W, F, i),
            "identities": lambda i: audit_identities(f, i),
            "mondo": lambda i: audit_mondo(f, i),
            "preimage": lambda i: audit_preimage(f, i),
        }[args.prop]
        reports = [run(i) for i in indices]
    checks, text = [], []
    for r in reports:
        name = r.prop if r.i is None else f"{r.prop} i={r.i}"
        checks.append(_check(name, r.passed, r.lhs, r.rhs, r.witnesses))
        safe = "" if r.safe is None else (" SAFE" if r.safe else " UNSAFE")
        text.append(f"{name}{safe}: lhs={r.lhs} rhs={r.rhs}")
        for k, v in r.details.items():
            text.append(f"  {k}: {v}")
        for w in r.witnesses:
            text.append(f"  witness: {w}")
    return cfg, {"reports": [r.to_json() for r in reports]}, checks, text


def cmd_eq(args):
    F, W, cfg = _space_config(args)
    mode = "random" if args.random else "exhaustive"
    cfg.update(degree=args.degree, mode=mode)
    seed = args.seed if mode == "random" else None
    if mode == "random":
        cfg.update(trials=args.trials, seed=args.seed)
    else:
        cfg["budget"] = args.budget
    cache = ResultCache(args.cache) if args.cache else None
    searched = None
    if mode == "random":
        searched = min(args.trials, candidate_count(len(monomial_basis(W, args.degree)), F.q))
    res = cache.lookup(W, args.degree, F, mode, seed, searched) if cache else None
    if res is None:
        if mode == "random":
            res = eq_random(W, args.degree, F, args.trials, args.seed)
        else:
            res = eq_exhaustive(W, args.degree, F, budget=args.budget, threads=args.threads)
        if cache:
            cache.store(res)
    p = pn(W.n, F.q)
    checks = [_check("at_most_pn", res.value <= p, res.value, p)]
    con = res.checks.get("construction")
    if con:
        checks.append(_check("construction", con["ok"], res.value, con["count"], [con["poly"]]))
    results = res.to_json()
    results.pop("checks", None)
    text = [f"e_q = {res.value}" + ("" if res.exhaustive else " (lower bound)"),
            f"searched {res.searched} candidates, {res.maximizers} maximizers"]
    text += [f"witness: {w}" for w in results["witnesses"]]
    return cfg, results, checks, text


def cmd_unscrew(args):
    F, W, cfg = _space_config(args)
    f = _poly(args, F, W)
    cfg["poly"] = str(f)
    level, r = unscrew(f)
    results = {"polynomials": [str(g) for g in level], "report": r.to_json()}
    checks = [_check("unscrew", r.passed, r.lhs, r.rhs, r.witnesses)]
    text = [f"{len(level)} polynomials on P^{W.n}"]
    text += [f"  {g}  N={c}" for g, c in zip(level, r.details["counts"])]
    text.append(f"{r.lhs} <= {r.rhs}: " + ("OK" if r.passed else "VIOLATED"))
    return cfg, results, checks, text


def cmd_reproduce(args):
    res = run_suite(args.suite, threads=args.threads)
    checks = [_check(json.dumps(r.config, sort_keys=True), r.ok, r.computed, r.expected) for r in res.rows]
    return {"suite": args.suite}, res.to_json(), checks, format_table(res).splitlines()


COMMANDS = {
    "points": cmd_points,
    "count": cmd_count,
    "bounds": cmd_bounds,
    "audit": cmd_audit,
    "eq": cmd_eq,
    "unscrew": cmd_unscrew,
    "reproduce": cmd_reproduce,
}


def _modulus_text(coeffs) -> str:
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c:
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            terms.append(mono if c == 1 and mono else f"{c}{mono}")
    return " + ".join(terms)


def _header(cfg) -> str:
    parts = [f"wproj {__version__}", f"backend {kernels.BACKEND}"]
    for k, v in cfg.items():
        if isinstance(v, list):
            v = ",".join(map(str, v))
        elif k == "field":
            v = f"GF({v['q']})" + (f" modulus {_modulus_text(v['modulus'])}" if v["modulus"] else "") \
                + f" delta {v['delta']}"
        parts.append(f"{k}: {v}")
    return "# " + " | ".join(parts)


def render(command, cfg, results, checks, text, fmt) -> str:
    config = {"command": command, **cfg, "version": __version__}
    if fmt == "json":
        report = {"config": config, "results": results, "checks": checks, "version": __version__}
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    lines = [_header(cfg | {"command": command})] + list(text)
    if checks and command != "reproduce":
        lines += [f"check {c['name']}: {'PASS' if c['pass'] else 'FAIL'}" for c in checks]
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg, results, checks, text = COMMANDS[args.command](args)
        out = render(args.command, cfg, results, checks, text, args.format)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        return EXIT_OK if all(c["pass"] for c in checks) else EXIT_VIOLATION
    except UsageError as e:
        print(f"wproj: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # anything else is a bug
        print(f"wproj: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CRASH


def main() -> None:
    sys.exit(run())
