"""Command-line interface.

Subcommands: gen-scenarios, preprocess, solve, execute, tbl, oracle, bench.
All solver-facing commands take --seed and produce deterministic output;
wall-clock columns stay blank unless --timing is given.
"""

import argparse
import csv
import io
import json
import sys

from .world import Hypothesis, load_scenario_file, scenario_to_doc
from .belief import base_heuristic
from .solver import SolverParams, extract_history_policy, inflate, solve
from .policy import (
    evaluate_exact,
    execute,
    load_database,
    load_policy,
    save_database,
    save_policy,
)
from .preprocess import MODES, build_database, family_from_scenario
from .oracle import oracle_optimal
from .tbl import evaluate_tbl, run_tbl
from .bench import (
    generate_nested_scenarios,
    parse_method,
    report_to_csv,
    report_to_json,
    run_benchmark,
)
from .errors import ContactLocError


def _parse_pose(text):
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("pose must be x,y[,rot]")
    rot = int(parts[2]) if len(parts) == 3 else 0
    return Hypothesis(int(parts[0]), int(parts[1]), rot)


def _family_or_problem(args):
    scenario = load_scenario_file(args.scenario)
    family = family_from_scenario(scenario)
    if getattr(args, "set", None):
        match = [s for s in family.sets if s[0] == args.set]
        if not match:
            known = ", ".join(sid for sid, _ in family.sets)
            raise ContactLocError(f"unknown set {args.set!r} (have: {known})")
        sid, hyps = match[0]
        return scenario, family, family.problem(sid, hyps)
    return scenario, family, None


def _emit(text, out):
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen_scenarios(args):
    scenario = load_scenario_file(args.base)
    nominal = _parse_pose(args.nominal)
    extents = [int(e) for e in args.extents.split(",")]
    rotations = [int(r) for r in args.rotations.split(",")] if args.rotations else None
    family = generate_nested_scenarios(scenario, nominal, extents, rotations)
    scenario.uncertainty_sets = family.sets
    doc = scenario_to_doc(scenario)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def cmd_preprocess(args):
    scenario = load_scenario_file(args.scenario)
    family = family_from_scenario(scenario)
    db = build_database(family, args.epsilon, mode=args.mode, seed=args.seed)
    save_database([(e.scenario_id, e.policy) for e in db.entries if e.policy],
                  args.out)
    if args.stats:
        oracle_costs = {}
        for entry in db.entries:
            sid = entry.scenario_id
            hyps = dict(family.sets)[sid]
            oracle_costs[sid] = oracle_optimal(family.problem(sid, hyps))[0]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario_id", "|H|", "mode", "epsilon", "backups",
                         "wall_time_s", "expected_cost", "oracle_cost", "success"])
        for entry in db.entries:
            r = entry.row
            writer.writerow([
                r["scenario_id"], r["H_size"], r["mode"], f"{r['epsilon']:.9g}",
                r["backups"],
                f"{r['wall_time_s']:.3f}" if args.timing else "",
                "" if r["expected_cost"] is None else f"{float(r['expected_cost']):.9g}",
                f"{float(oracle_costs[r['scenario_id']]):.9g}",
                "1" if r["success"] else "0",
            ])
        with open(args.stats, "w") as f:
            f.write(buf.getvalue())
    solved = sum(1 for e in db.entries if e.row["success"])
    print(f"preprocessed {len(db.entries)} problems, {solved} solved -> {args.out}")


def cmd_solve(args):
    _, _, problem = _family_or_problem(args)
    if problem is None:
        raise ContactLocError("solve requires --set")
    params = SolverParams(epsilon=args.epsilon, rng_seed=args.seed)
    heuristic = inflate(lambda b: base_heuristic(problem.model, b), args.epsilon)
    table, stats = solve(problem, heuristic, params)
    if not stats.converged:
        raise ContactLocError(
            f"solve did not converge within {params.backup_budget} backups"
        )
    policy = extract_history_policy(problem, table, heuristic=heuristic,
                                    params=params, stats=stats)
    save_policy(policy, args.out)
    cost, ok = evaluate_exact(problem, policy)
    print(f"v_start={stats.v_start:.9g} backups={stats.backups} "
          f"expected_cost={float(cost):.9g} success={ok} -> {args.out}")


def cmd_execute(args):
    _, _, problem = _family_or_problem(args)
    if args.policy:
        policy = load_policy(args.policy)
    else:
        entries = load_database(args.db)
        match = [p for sid, p in entries if sid == args.set]
        if not match:
            raise ContactLocError(f"set {args.set!r} not in database {args.db}")
        policy = match[0]
    if problem is None:
        scenario = load_scenario_file(args.scenario)
        family = family_from_scenario(scenario)
        sid = policy.meta.get("scenario_id", "")
        hyps = dict(family.sets).get(sid, policy.b_start.H)
        problem = family.problem(sid, hyps)
    groundtruth = _parse_pose(args.groundtruth)
    trace = execute(problem, policy, groundtruth)
    summary = {
        "localized": trace.localized,
        "total_cost": trace.total_cost,
        "steps": len(trace.steps),
        "final_belief": trace.final_belief.encode(),
    }
    _emit(json.dumps(summary, sort_keys=True) + "\n", args.out)


def cmd_tbl(args):
    _, family, problem = _family_or_problem(args)
    if problem is None:
        raise ContactLocError("tbl requires --set")
    rows = []
    if args.groundtruth:
        trace = run_tbl(problem, _parse_pose(args.groundtruth))
        rows.append([problem.scenario_id, len(problem.b_start.H),
                     args.groundtruth, trace.total_cost,
                     "1" if trace.localized else "0"])
    else:
        cost, ok = evaluate_tbl(problem)
        rows.append([problem.scenario_id, len(problem.b_start.H), "",
                     f"{float(cost):.9g}", "1" if ok else "0"])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scenario_id", "|H|", "groundtruth", "expected_cost", "success"])
    writer.writerows(rows)
    _emit(buf.getvalue(), args.stats or args.out)


def cmd_oracle(args):
    scenario = load_scenario_file(args.scenario)
    family = family_from_scenario(scenario)
    targets = family.sets
    if args.set:
        targets = [s for s in targets if s[0] == args.set]
        if not targets:
            raise ContactLocError(f"unknown set {args.set!r}")
    results = []
    for sid, hyps in targets:
        cost, values = oracle_optimal(family.problem(sid, hyps))
        results.append({"scenario_id": sid, "H_size": len(hyps),
                        "optimal_cost": float(cost), "beliefs": len(values)})
    if args.format == "json":
        _emit(json.dumps(results, sort_keys=True, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["scenario_id", "|H|", "optimal_cost", "beliefs"])
        for r in results:
            writer.writerow([r["scenario_id"], r["H_size"],
                             f"{r['optimal_cost']:.9g}", r["beliefs"]])
        _emit(buf.getvalue(), args.out)


def cmd_bench(args):
    scenario = load_scenario_file(args.scenario)
    family = family_from_scenario(scenario)
    methods = [parse_method(m) for m in args.methods.split(",")]
    rows = run_benchmark(family, methods, seed=args.seed)
    if args.format == "json":
        text = report_to_json(rows, include_timing=args.timing)
    else:
        text = report_to_csv(rows, include_timing=args.timing)
    _emit(text, args.out)
    if args.out and not args.no_figures:
        from .report import render_report_figures
        stem = args.out.rsplit(".", 1)[0]
        for p in render_report_figures(rows, stem):
            print(f"figure -> {p}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = argparse.ArgumentParser(
        prog="contactloc",
        description="Planning suite for active object localization via contacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-scenarios", parents=[common],
                       help="generate nested uncertainty sets around a nominal pose")
    p.add_argument("--base", required=True)
    p.add_argument("--nominal", required=True, help="x,y[,rot]")
    p.add_argument("--extents", required=True, help="comma-separated half-widths")
    p.add_argument("--rotations", default=None)
    p.set_defaults(func=cmd_gen_scenarios)

    p = sub.add_parser("preprocess", parents=[common],
                       help="build a policy database for a scenario family")
    p.add_argument("--scenario", required=True)
    p.add_argument("--epsilon", type=float, default=2.0)
    p.add_argument("--mode", choices=MODES, default="experience")
    p.add_argument("--stats", default=None)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("solve", parents=[common],
                       help="solve one uncertainty set with the plain solver")
    p.add_argument("--scenario", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("execute", parents=[common],
                       help="run a stored policy against a groundtruth pose")
    p.add_argument("--scenario", required=True)
    p.add_argument("--policy", default=None)
    p.add_argument("--db", default=None)
    p.add_argument("--set", default=None)
    p.add_argument("--groundtruth", required=True, help="x,y[,rot]")
    p.set_defaults(func=cmd_execute)

    p = sub.add_parser("tbl", parents=[common],
                       help="myopic information-gain baseline")
    p.add_argument("--scenario", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--groundtruth", default=None)
    p.add_argument("--stats", default=None)
    p.set_defaults(func=cmd_tbl)

    p = sub.add_parser("oracle", parents=[common],
                       help="exact optimal expected costs")
    p.add_argument("--scenario", required=True)
    p.add_argument("--set", default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", parents=[common],
                       help="compare methods and emit a report (CSV/JSON + figures)")
    p.add_argument("--scenario", required=True)
    p.add_argument("--methods", default="rtdp:1,e-rtdp:2,tbl",
                   help="comma list, e.g. rtdp:1,rtdp:2,e-rtdp:2,tbl")
    p.add_argument("--timing", action="store_true")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ContactLocError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
