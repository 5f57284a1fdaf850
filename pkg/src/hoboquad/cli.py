"""Command-line interface.

Exit status: 0 on success or a passing verification, 1 when verification
finds a counterexample, 2 on usage and parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import encoders
from .benchmark import compare_routes, format_rows, rows_to_json
from .datasets import PRESETS, DatasetSpec, gen_dataset, stats
from .gadgets import one_aux_infeasibility_certificate
from .io import (
    FormatError,
    load_result,
    read_hobo,
    read_hypergraph,
    read_map,
    read_wcnf,
    write_hobo,
    write_map,
)
from .polynomial import Domain, VariableRegistry, convert_domain, relabel
from .quadratize import quadratize_route
from .solve import SaParams, TooManyVariablesError, brute_force_min, sa_solve, verify_quadratization


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _int_pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return vals[0], vals[1]


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_convert(args):
    p = read_hobo(args.inp)
    write_hobo(convert_domain(p, args.to), args.out)
    return 0


def cmd_quadratize(args):
    p = read_hobo(args.inp)
    heuristic = f"algo{args.algo}"
    res = quadratize_route(p, args.space, heuristic, args.penalty, termwise_negative=args.termwise_negative)
    write_hobo(res.quadratic, args.out)
    write_map(res, args.map)
    if args.stats_json:
        _dump_json(stats(res.quadratic).to_json(), args.stats_json)
    st = stats(res.quadratic)
    print(f"{len(res.substitutions)} substitutions, {res.n_aux} auxiliary variables, "
          f"{st.variables} variables, {st.total_terms} terms, M = {res.penalty_weight:g}")
    return 0


def cmd_verify(args):
    original = read_hobo(args.original)
    quad = read_hobo(args.quadratized)
    subs, M = read_map(args.map, quad.named_registry())
    result = load_result(quad, subs, M)
    reg = result.registry
    # align the original's ids with the quadratized file by variable name
    orig_reg = original.named_registry()
    mapping, names = {}, [v.name for v in reg.variables]
    for v in orig_reg.variables:
        if v.name in reg:
            mapping[v.id] = reg.id(v.name)
        else:
            mapping[v.id] = len(names)
            names.append(v.name)
    original = relabel(original, mapping)
    report = verify_quadratization(original, result, var_limit=args.limit, n_jobs=args.jobs)
    named_reg = VariableRegistry.from_names(names)
    if args.json:
        _dump_json(report.to_dict(named_reg))
    else:
        print(f"checked {report.assignments_checked} assignments of the original variables")
        print(f"original min {report.original_min:g}, quadratic min {report.quadratic_min:g}")
        if report.passed:
            print("PASS")
        else:
            print(f"FAIL: {report.message}")
            ce = report.counterexample.items()
            print("counterexample: " + " ".join(f"{named_reg.name(k)}={v}" for k, v in ce))
    return 0 if report.passed else 1


def cmd_solve(args):
    p = read_hobo(args.inp)
    if args.method == "exhaustive":
        report = brute_force_min(p, var_limit=args.limit, n_jobs=args.jobs)
    else:
        params = SaParams(seed=args.seed, sweeps=args.sweeps, restarts=args.restarts)
        report = sa_solve(p, params)
    _dump_json(report.to_dict(p.named_registry()))
    return 0


def cmd_stats(args):
    st = stats(read_hobo(args.inp))
    if args.json:
        _dump_json(st.to_json())
    else:
        print(f"variables {st.variables}")
        print(f"terms {st.total_terms}")
        for k, v in st.terms_by_degree.items():
            print(f"degree {k}: {v}")
    return 0


def cmd_gen(args):
    if args.preset:
        n, counts = PRESETS[args.preset]
        n = args.vars if args.vars is not None else n
        counts = args.degree_counts or counts
    else:
        if args.vars is None or not args.degree_counts:
            raise UsageError("gen needs --vars and --degree-counts (or --preset)")
        n, counts = args.vars, args.degree_counts
    lo, hi = args.coeff_range
    spec = DatasetSpec(n, counts, lo, hi, args.seed, args.domain)
    write_hobo(gen_dataset(spec), args.out)
    return 0


def cmd_encode(args):
    problem = args.problem
    if problem == "maxsat":
        if args.penalty is not None or args.balance is not None:
            raise UsageError("maxsat takes neither --penalty nor --balance")
        poly = encoders.encode_maxsat(read_wcnf(args.inp))
        note = "minimize: total weight of unsatisfied clauses"
    else:
        h = read_hypergraph(args.inp)
        if problem != "vertexcover" and args.penalty is not None:
            raise UsageError("--penalty only applies to vertexcover")
        if problem != "partition" and args.balance is not None:
            raise UsageError("--balance only applies to partition")
        if problem == "maxcover":
            poly = encoders.encode_max_cover(h)
            note = "maximize covered weight; written negated as a minimization"
        elif problem == "vertexcover":
            poly = encoders.encode_vertex_cover(h, args.penalty)
            note = "minimize: cover size, x_i = 0 puts node i in the cover"
        elif problem == "maxcut":
            poly = encoders.encode_max_cut(h)
            note = "maximize cut edges; written negated as a minimization"
        else:
            poly = encoders.encode_partition(h, args.balance)
            note = "minimize: cut edges plus balance penalty"
    write_hobo(poly, args.out, comments=[f"objective: {note}"])
    return 0


def cmd_certify(args):
    cert = one_aux_infeasibility_certificate()
    print(cert.summary())
    return 0


def cmd_bench(args):
    if args.inp:
        p = read_hobo(args.inp)
    elif args.preset:
        p = gen_dataset(DatasetSpec.from_preset(args.preset, seed=args.seed))
    else:
        raise UsageError("bench needs --in or --preset")
    rows = compare_routes(p, M=args.penalty)
    if args.json:
        _dump_json(rows_to_json(rows))
    else:
        print(format_rows(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hoboquad", description="Quadratization of higher-order binary polynomials")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="rewrite a polynomial in the other variable space")
    p.add_argument("--to", required=True, choices=[d.value for d in Domain])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("quadratize", help="reduce to a quadratic plus a substitution map")
    p.add_argument("--algo", type=int, choices=[1, 2], default=1)
    p.add_argument("--space", choices=["native", "ising", "boolean"], default="native")
    p.add_argument("--penalty", type=float)
    p.add_argument("--termwise-negative", action="store_true",
                   help="Boolean space: one auxiliary per negative monomial")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--stats-json")
    p.set_defaults(func=cmd_quadratize)

    p = sub.add_parser("verify", help="check a quadratization exhaustively")
    p.add_argument("--original", required=True)
    p.add_argument("--quadratized", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--limit", type=int, default=24)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="minimize a polynomial")
    p.add_argument("--method", choices=["exhaustive", "sa"], default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--limit", type=int, default=24)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("stats", help="variable and per-degree term counts")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="generate a random sparse instance")
    p.add_argument("--vars", type=int)
    p.add_argument("--degree-counts", type=_int_list)
    p.add_argument("--preset", choices=sorted(PRESETS), help="use a preset histogram")
    p.add_argument("--coeff-range", type=_int_pair, default=(-10, 10))
    p.add_argument("--domain", choices=[d.value for d in Domain], default="ising")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="build a polynomial for a hypergraph or MAX-SAT problem")
    p.add_argument("problem", choices=["maxcover", "vertexcover", "maxcut", "partition", "maxsat"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--penalty", type=float)
    group.add_argument("--balance", type=float)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("certify-theorem1",
                       help="show that no single-auxiliary quadratic spin gadget exists")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bench", help="compare spin and Boolean routes with both heuristics")
    p.add_argument("--in", dest="inp")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--penalty", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def _glue_ranges(argv):
    # "--coeff-range -10,10" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--coeff-range":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_ranges(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormatError, TooManyVariablesError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hoboquad {args.command}: error: {msg}", file=sys.stderr)
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
