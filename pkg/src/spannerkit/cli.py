"""Command-line front end.

Subcommands: generate | solve | verify | bench | export-lp | oracle | report.
Exit codes: 0 on success, 2 when the outcome is infeasibility or a hit limit
(bound_only, verification failure, enumeration cap), 1 on usage errors such as
bad flags or missing files.  The SPANNERKIT_OUT environment variable supplies
the default output directory for artifacts when --out is not given.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bench as benchmod
from . import report as reportmod
from .arcflow import ArcConfig, build_ab_model, export_lp
from .colgen import SolverConfig
from .graph import GraphError, metricate
from .greedy import verify_spanner
from .instances import (
    FAMILIES,
    GenerationError,
    Instance,
    InstanceSpec,
    WEIGHT_MODELS,
    generate,
    make_fixture,
    read_instance,
    write_instance,
)
from .lp import LpError
from .oracle import OracleSizeError, oracle_optimum

OUT_ENV = "SPANNERKIT_OUT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _out_dir(path: str | None) -> str:
    if path:
        return path
    return os.environ.get(OUT_ENV, ".")


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--solver", choices=("pb", "ab", "bg"), default="pb")
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--pairs", choices=("adjacent", "all"), default="adjacent")
    sub.add_argument("--init", choices=("ksp1", "kspk+bg", "brute"), default="kspk+bg")
    sub.add_argument("--k", type=int, default=10)
    sub.add_argument("--mu", choices=("1", "2", "3", "inf"), default="3")
    sub.add_argument("--pricer", choices=("basic", "bia"), default="bia")
    sub.add_argument("--no-metricate", action="store_true")
    sub.add_argument("--no-fix", action="store_true")
    sub.add_argument("--no-prune", action="store_true")
    sub.add_argument("--time-limit", type=float, default=None)
    sub.add_argument("--node-limit", type=int, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="spannerkit", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="sample a random instance to a file")
    gen.add_argument("--family", choices=FAMILIES, default="er")
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--density", type=float, default=0.5)
    gen.add_argument("--density-mode", choices=("rel", "deg"), default="rel")
    gen.add_argument("--weights", choices=WEIGHT_MODELS, default="w1")
    gen.add_argument("--waxman-beta", type=float, default=0.14)
    gen.add_argument("--fixture", default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_generate)

    solve = subs.add_parser("solve", help="run one solver on an instance file")
    solve.add_argument("instance")
    _add_solver_flags(solve)
    solve.set_defaults(func=cmd_solve)

    verify = subs.add_parser("verify", help="check a subgraph against a stretch bound")
    verify.add_argument("instance")
    verify.add_argument("--alpha", type=float, required=True)
    verify.add_argument("--pairs", choices=("adjacent", "all"), default="all")
    verify.add_argument("--edges", default=None, help="JSON file with edge ids; default: all edges")
    verify.set_defaults(func=cmd_verify)

    ben = subs.add_parser("bench", help="run a named suite and write JSONL + CSV")
    ben.add_argument("--suite", choices=sorted(benchmod.SUITES), required=True)
    ben.add_argument("--solvers", default="pb,ab,bg")
    ben.add_argument("--time-limit", type=float, default=None)
    ben.add_argument("--node-limit", type=int, default=None)
    ben.add_argument("--out", default=None)
    ben.set_defaults(func=cmd_bench)

    exp = subs.add_parser("export-lp", help="write the arc model in LP format")
    exp.add_argument("instance")
    exp.add_argument("--alpha", type=float, required=True)
    exp.add_argument("--pairs", choices=("adjacent", "all"), default="adjacent")
    exp.add_argument("--no-metricate", action="store_true")
    exp.add_argument("--no-fix", action="store_true")
    exp.add_argument("--outflow", choices=("strict", "one"), default="strict")
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=cmd_export_lp)

    orc = subs.add_parser("oracle", help="brute-force optimum for small instances")
    orc.add_argument("instance")
    orc.add_argument("--alpha", type=float, required=True)
    orc.add_argument("--max-subsets", type=int, default=2_000_000)
    orc.set_defaults(func=cmd_oracle)

    rep = subs.add_parser("report", help="render figures from bench JSONL records")
    rep.add_argument("records", help="JSONL file written by bench or solve --out")
    rep.add_argument("--out", default=None)
    rep.set_defaults(func=cmd_report)
    return parser


def _load(path: str) -> Instance:
    if not os.path.exists(path):
        raise UsageError(f"instance file not found: {path}")
    return read_instance(path)


def cmd_generate(args) -> int:
    if args.fixture:
        inst = make_fixture(args.fixture)
    else:
        spec = InstanceSpec(
            family=args.family,
            n=args.n,
            density_mode="complete" if args.family == "complete" else args.density_mode,
            density_value=args.density,
            weight_model=args.weights,
            seed=args.seed,
            waxman_beta=args.waxman_beta,
        )
        inst = generate(spec)
    out = args.out
    if out is None:
        out = os.path.join(_out_dir(None), f"{inst.name}.stp")
    write_instance(out, inst)
    print(out)
    return 0


def _mu_value(text: str) -> int | None:
    return None if text == "inf" else int(text)


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    if args.solver == "pb":
        config = SolverConfig(
            alpha=args.alpha,
            pairs_mode=args.pairs,
            init=args.init,
            k=args.k,
            mu=_mu_value(args.mu),
            pricer=args.pricer,
            metricate=not args.no_metricate,
            fix_mandatory=not args.no_fix,
            prune_cache=not args.no_prune,
            time_limit=args.time_limit,
            node_limit=args.node_limit,
        )
        record = benchmod.run_solver(inst, "pb", args.alpha, pb_config=config)
    elif args.solver == "ab":
        config = ArcConfig(
            alpha=args.alpha,
            pairs_mode=args.pairs,
            metricate=not args.no_metricate,
            fix_unreachable=not args.no_fix,
            fix_mandatory=not args.no_fix,
            time_limit=args.time_limit,
            node_limit=args.node_limit,
        )
        record = benchmod.run_solver(inst, "ab", args.alpha, ab_config=config)
    else:
        record = benchmod.run_solver(inst, "bg", args.alpha)
    print(record.to_json())
    if args.out:
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")
    return 0 if record.status in ("optimal", "heuristic") else 2


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    g = inst.graph
    if args.edges:
        if not os.path.exists(args.edges):
            raise UsageError(f"edge file not found: {args.edges}")
        with open(args.edges, encoding="utf-8") as fh:
            edge_ids = json.load(fh)
        if not isinstance(edge_ids, list):
            raise UsageError("edge file must hold a JSON list of edge ids")
        edges = [int(e) for e in edge_ids]
    else:
        edges = list(range(g.m))
    report = verify_spanner(g, args.alpha, edges, mode=args.pairs)
    ratio = None
    if report.worst_budget and report.worst_distance is not None:
        if math.isfinite(report.worst_distance):
            ratio = args.alpha * report.worst_distance / report.worst_budget
    payload = {
        "feasible": report.feasible,
        "ratio": ratio,
        "worst_pair": list(report.worst_pair) if report.worst_pair else None,
        "worst_distance": report.worst_distance if report.worst_distance is not None and math.isfinite(report.worst_distance) else None,
        "worst_budget": report.worst_budget,
        "total_weight": sum(g.weights[e] for e in set(edges)),
    }
    print(json.dumps(payload, sort_keys=True))
    return 0 if report.feasible else 2


def cmd_bench(args) -> int:
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    for s in solvers:
        if s not in benchmod.SOLVER_IDS:
            raise UsageError(f"unknown solver {s!r}")
    records = benchmod.run_suite(
        args.suite,
        solvers,
        time_limit=args.time_limit,
        node_limit=args.node_limit,
    )
    out_dir = _out_dir(args.out)
    os.makedirs(out_dir, exist_ok=True)
    jsonl = os.path.join(out_dir, f"{args.suite}.jsonl")
    summary = os.path.join(out_dir, f"{args.suite}.csv")
    benchmod.write_jsonl(records, jsonl)
    benchmod.write_csv(records, summary)
    print(jsonl)
    print(summary)
    return 0


def cmd_export_lp(args) -> int:
    inst = _load(args.instance)
    g = inst.graph
    if not args.no_metricate:
        g, _ = metricate(g)
    model = build_ab_model(
        g,
        args.alpha,
        args.pairs,
        fix_unreachable=not args.no_fix,
        fix_mandatory=not args.no_fix,
        bg_bound=False,
        outflow_rhs=args.outflow,
    )
    out = args.out
    if out is None:
        out = os.path.join(_out_dir(None), f"{inst.name}.lp")
    export_lp(model, out)
    with open(out + ".fixed.json", "w", encoding="utf-8") as fh:
        fh.write(model.ledger_json() + "\n")
    print(out)
    return 0


def cmd_oracle(args) -> int:
    inst = _load(args.instance)
    value, edges = oracle_optimum(inst.graph, args.alpha, max_subsets=args.max_subsets)
    print(json.dumps({"optimum": value, "edges": list(edges)}, sort_keys=True))
    return 0


def cmd_report(args) -> int:
    if not os.path.exists(args.records):
        raise UsageError(f"records file not found: {args.records}")
    records = benchmod.read_jsonl(args.records)
    if not records:
        raise UsageError(f"no records in {args.records}")
    out_dir = _out_dir(args.out)
    prefix = os.path.splitext(os.path.basename(args.records))[0]
    created = reportmod.render_report(records, out_dir, prefix=prefix)
    for path in created:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GenerationError, LpError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OracleSizeError as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return 2
    except GraphError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
