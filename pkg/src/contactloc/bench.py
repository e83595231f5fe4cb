"""Benchmark orchestration: nested scenario generation, method comparison,
and deterministic CSV/JSON reporting.

Relative metrics are computed against the plain solver at epsilon 1 with no
experience when that method is part of the run; otherwise rows are relative
to themselves. Speedup is reported in Bellman backups, which are seed-exact
and machine-independent; wall time is kept as a secondary, opt-in column.
"""

import csv
import io
import json

from .errors import ScenarioError
from .world import Hypothesis, footprint
from .preprocess import (
    ProblemFamily,
    build_database,
    family_from_scenario,
    order_problems,
)
from .oracle import oracle_optimal
from .tbl import evaluate_tbl

CSV_COLUMNS = [
    "scenario_id", "|H|", "method", "epsilon", "success", "backups",
    "wall_time_s", "expected_cost", "oracle_cost",
    "relative_speedup", "relative_cost",
]


def generate_nested_scenarios(scenario, nominal, extents, rotations=None):
    """Nested axis-aligned boxes of hypothesis poses around a nominal pose.

    Each extent e yields every pose within Chebyshev distance e of the
    nominal (optionally crossed with a rotation subset), varying only along
    axes where the grid is wider than one cell. An extent whose box leaves
    the grid is an error.
    """
    if isinstance(nominal, tuple):
        nominal = Hypothesis(*nominal)
    rots = tuple(rotations) if rotations else (nominal.rot,)
    world, model = scenario.world, scenario.model
    sets = []
    seen = set()
    for e in sorted(set(extents)):
        if e < 0:
            raise ValueError("extent must be >= 0")
        box = []
        dxs = range(-e, e + 1) if world.width > 1 else (0,)
        dys = range(-e, e + 1) if world.height > 1 else (0,)
        for dx in dxs:
            for dy in dys:
                for rot in rots:
                    h = Hypothesis(nominal.x + dx, nominal.y + dy, rot)
                    cells = footprint(model, h)
                    if not all(world.in_bounds(c) for c in cells):
                        raise ScenarioError(
                            f"extent={e}",
                            f"pose {h} exceeds the grid",
                        )
                    if scenario.r_start in cells:
                        raise ScenarioError(
                            f"extent={e}",
                            f"pose {h} covers the robot start",
                        )
                    box.append(h)
        canon = tuple(sorted(set(box)))
        if canon in seen:
            continue
        seen.add(canon)
        sets.append((f"set{len(sets):03d}", canon))
    return ProblemFamily(world, model, scenario.r_start, scenario.actions, sets)


def parse_method(text):
    """'rtdp:2' -> ('rtdp', 2.0); 'tbl' -> ('tbl', None)."""
    if ":" in text:
        name, eps = text.split(":", 1)
        return name, float(eps)
    return text, None


def run_benchmark(family, methods, seed=0, params=None, oracle_values=None):
    """Run every method on every problem of the family and build report rows.

    methods: iterable of (name, epsilon) with name in {rtdp, e-rtdp, tbl}.
    Returns a list of row dicts sorted by (scenario_id, method, epsilon).
    """
    ordered = order_problems(family)
    if oracle_values is None:
        oracle_values = {
            sid: oracle_optimal(family.problem(sid, hyps))[0]
            for sid, hyps in ordered
        }

    rows = []
    for name, eps in methods:
        if name == "tbl":
            for sid, hyps in ordered:
                problem = family.problem(sid, hyps)
                cost, ok = evaluate_tbl(problem)
                rows.append({
                    "scenario_id": sid, "H_size": len(hyps),
                    "method": "tbl", "epsilon": None, "success": ok,
                    "backups": 0, "wall_time_s": 0.0,
                    "expected_cost": cost,
                })
        elif name in ("rtdp", "e-rtdp"):
            if eps is None:
                raise ValueError(f"method {name} needs an epsilon, e.g. {name}:2")
            mode = "experience" if name == "e-rtdp" else "no-experience"
            db = build_database(family, eps, mode=mode, seed=seed, params=params)
            for entry in db.entries:
                r = entry.row
                rows.append({
                    "scenario_id": r["scenario_id"], "H_size": r["H_size"],
                    "method": name, "epsilon": eps, "success": r["success"],
                    "backups": r["backups"], "wall_time_s": r["wall_time_s"],
                    "expected_cost": r["expected_cost"],
                })
        else:
            raise ValueError(f"unknown method {name!r}")

    baseline = {}
    for row in rows:
        if row["method"] == "rtdp" and row["epsilon"] == 1.0:
            baseline[row["scenario_id"]] = row
    for row in rows:
        base = baseline.get(row["scenario_id"], row)
        row["oracle_cost"] = oracle_values.get(row["scenario_id"])
        if row["backups"] and base["backups"]:
            row["relative_speedup"] = base["backups"] / row["backups"]
        else:
            row["relative_speedup"] = None
        if row["expected_cost"] and base["expected_cost"]:
            row["relative_cost"] = float(row["expected_cost"]) / float(base["expected_cost"])
        elif row["expected_cost"] is not None and row["expected_cost"] == base["expected_cost"]:
            row["relative_cost"] = 1.0
        else:
            row["relative_cost"] = None
    rows.sort(key=lambda r: (r["scenario_id"], r["method"],
                             -1.0 if r["epsilon"] is None else r["epsilon"]))
    return rows


def _fmt(value, timing=False):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.9g}"
    return f"{float(value):.9g}"


def report_to_csv(rows, include_timing=False):
    """RFC-4180-style CSV text. Wall time is blank unless include_timing is
    set, keeping the default output byte-identical across seeded reruns."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            r["scenario_id"],
            r["H_size"],
            r["method"],
            _fmt(r["epsilon"]),
            _fmt(r["success"]),
            r["backups"],
            _fmt(r["wall_time_s"]) if include_timing else "",
            _fmt(r["expected_cost"]),
            _fmt(r["oracle_cost"]),
            _fmt(r["relative_speedup"]),
            _fmt(r["relative_cost"]),
        ])
    return buf.getvalue()


def report_to_json(rows, include_timing=False):
    out = []
    for r in rows:
        d = dict(r)
        for key in ("expected_cost", "oracle_cost"):
            if d[key] is not None:
                d[key] = float(d[key])
        if not include_timing:
            d["wall_time_s"] = None
        out.append(d)
    return json.dumps(out, sort_keys=True, indent=2) + "\n"
