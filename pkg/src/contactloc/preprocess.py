"""Database preprocessing: solve a family of localization problems in order
of increasing uncertainty, reusing each solution as experience for the next.

Modes:
  experience    — roll the most similar solved policy out from the new start
  naive         — reuse the solved policy from its own start (ablation)
  random-order  — experience machinery, but problems in seeded random order
  no-experience — plain inflated base heuristic for every problem
"""

from dataclasses import dataclass, field
from fractions import Fraction
import random

from .belief import BeliefState, Problem, base_heuristic
from .errors import IndistinguishableHypotheses
from .experience import (
    experience_heuristic,
    naive_experience,
    precompute_values,
    rollout_experience,
)
from .policy import evaluate_exact
from .solver import SolverParams, extract_history_policy, inflate, solve

MODES = ("experience", "naive", "random-order", "no-experience")


@dataclass
class ProblemFamily:
    world: object
    model: object
    r_start: tuple
    actions: tuple
    sets: list  # list of (scenario_id, tuple of Hypothesis)

    def __post_init__(self):
        if not self.sets:
            raise ValueError("problem family must contain at least one uncertainty set")
        seen = set()
        for sid, hyps in self.sets:
            if not hyps:
                raise ValueError(f"{sid}: empty hypothesis set")
            if hyps in seen:
                raise ValueError(f"{sid}: duplicate uncertainty set")
            seen.add(hyps)

    def problem(self, sid, hyps):
        return Problem(self.world, self.model, self.actions,
                       BeliefState.make(self.r_start, hyps), scenario_id=sid)


def family_from_scenario(scenario):
    return ProblemFamily(scenario.world, scenario.model, scenario.r_start,
                         scenario.actions, list(scenario.uncertainty_sets))


@dataclass
class DatabaseEntry:
    scenario_id: str
    policy: object  # HistoryPolicy or None on failure
    row: dict


@dataclass
class PolicyDatabase:
    entries: list = field(default_factory=list)

    def get(self, scenario_id):
        for e in self.entries:
            if e.scenario_id == scenario_id:
                return e
        return None

    def policies(self):
        return [(e.scenario_id, e.policy) for e in self.entries if e.policy]


def order_problems(family):
    """Ascending hypothesis-set size, ties by canonical set encoding."""
    def canon(hyps):
        return ";".join(f"{h.x},{h.y},{h.rot}" for h in hyps)
    return sorted(family.sets, key=lambda e: (len(e[1]), canon(e[1])))


def select_experience(solved, H_current):
    """Most similar solved policy by Jaccard overlap of hypothesis sets.

    solved: list of (scenario_id, HistoryPolicy) in insertion order. Ties
    prefer the larger solved set, then the earlier entry. None when empty.
    """
    cur = set(H_current)
    best = None
    best_key = None
    for idx, (sid, pol) in enumerate(solved):
        hs = set(pol.b_start.H)
        jac = Fraction(len(hs & cur), len(hs | cur))
        key = (-jac, -len(hs), idx)
        if best_key is None or key < best_key:
            best, best_key = pol, key
    return best


def build_database(family, epsilon, mode="experience", seed=0, params=None):
    """Solve every problem in the family and collect policies plus stats rows.

    Per-problem failures (budget exhaustion) are recorded and the build
    continues; IndistinguishableHypotheses aborts only that problem.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    base_params = params or SolverParams()

    ordered = order_problems(family)
    if mode == "random-order":
        rng = random.Random(seed)
        rng.shuffle(ordered)

    db = PolicyDatabase()
    for index, (sid, hyps) in enumerate(ordered):
        problem = family.problem(sid, hyps)
        solved = db.policies()
        use_experience = mode in ("experience", "naive", "random-order") and solved
        if use_experience:
            source = select_experience(solved, hyps)
            if mode == "naive":
                exp = naive_experience(problem, source)
            else:
                exp = rollout_experience(problem, source, problem.b_start)
            precompute_values(exp, epsilon)
            heuristic = experience_heuristic(exp)
            solver_name = "e-rtdp"
        else:
            heuristic = inflate(lambda b: base_heuristic(family.model, b), epsilon)
            solver_name = "rtdp"

        run_params = SolverParams(
            epsilon=epsilon,
            residual_tol=base_params.residual_tol,
            consecutive_converged_rollouts=base_params.consecutive_converged_rollouts,
            backup_budget=base_params.backup_budget,
            max_rollout_depth=base_params.max_rollout_depth,
            rng_seed=seed * 100_003 + index,
        )
        row = {
            "scenario_id": sid,
            "H_size": len(hyps),
            "mode": mode,
            "epsilon": epsilon,
            "backups": 0,
            "rollouts": 0,
            "wall_time_s": 0.0,
            "converged": False,
            "expected_cost": None,
            "success": False,
            "error": None,
        }
        policy = None
        try:
            table, stats = solve(problem, heuristic, run_params)
        except IndistinguishableHypotheses as e:
            row["error"] = str(e)
            db.entries.append(DatabaseEntry(sid, None, row))
            continue
        row.update(backups=stats.backups, rollouts=stats.rollouts,
                   wall_time_s=stats.wall_time, converged=stats.converged)
        if stats.converged:
            policy = extract_history_policy(
                problem, table, heuristic=heuristic, params=run_params,
                stats=stats, solver_name=solver_name,
            )
            cost, ok = evaluate_exact(problem, policy)
            row["expected_cost"] = cost
            row["success"] = ok
        db.entries.append(DatabaseEntry(sid, policy, row))
    return db


def aggregate_stats(db):
    rows = [e.row for e in db.entries]
    solved = [r for r in rows if r["success"]]
    return {
        "problems": len(rows),
        "solved": len(solved),
        "success_rate": len(solved) / len(rows) if rows else 0.0,
        "total_backups": sum(r["backups"] for r in rows),
        "total_wall_time_s": sum(r["wall_time_s"] for r in rows),
    }
