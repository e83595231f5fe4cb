"""Myopic touch-based localization baseline.

At each step the action with maximum expected information gain (entropy of
the uniform belief, in bits) is executed. When no action yields information,
the robot walks toward the nearest cell whose occupancy differs between
hypotheses; without this fallback a discrete action set livelocks far from
the object.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
import math

from .errors import UnrealizableTask
from .world import DIRECTIONS, differing_cells, footprint, manhattan, simulate_action
from .belief import Observation, belief_update, expected_cost, is_goal, successors
from .policy import ExecutionTrace


@dataclass
class TblParams:
    step_cap: int = 10_000


def info_gain(world, model, b, a):
    """Expected entropy reduction of executing a from b, in bits."""
    n = len(b.H)
    gain = math.log2(n)
    for br in successors(world, model, b, a):
        gain -= float(br.prob) * math.log2(len(br.b_next.H))
    return gain


def _free_under_all(world, model, hyps, cell):
    if not world.in_bounds(cell) or world.is_obstacle(cell):
        return False
    return all(cell not in footprint(model, h) for h in hyps)


def _fallback_action(world, model, b, actions):
    """First action on a shortest path toward the nearest differing cell's
    adjacent free cell, through cells free under every hypothesis."""
    diff = sorted(differing_cells(model, b.H), key=lambda c: (manhattan(b.r, c), c))
    for target_obj in diff:
        adjacent = [
            (target_obj[0] + dx, target_obj[1] + dy)
            for dx, dy in DIRECTIONS.values()
        ]
        targets = sorted(
            c for c in adjacent if _free_under_all(world, model, b.H, c)
        )
        if not targets:
            continue
        # BFS distance field from the targets over cells free under all
        # hypotheses; then step in the direction that descends it.
        dist = {c: 0 for c in targets}
        queue = deque(targets)
        while queue:
            cur = queue.popleft()
            for dx, dy in DIRECTIONS.values():
                nxt = (cur[0] + dx, cur[1] + dy)
                if nxt not in dist and _free_under_all(world, model, b.H, nxt):
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        if b.r not in dist:
            continue
        for a in actions:
            dx, dy = DIRECTIONS[a.direction]
            nxt = (b.r[0] + dx, b.r[1] + dy)
            if nxt in dist and dist[nxt] < dist[b.r]:
                return a
    return actions[0]  # nothing helps; keep moving deterministically


def _choose_action(world, model, b, actions):
    best = None
    best_key = None
    for i, a in enumerate(actions):
        gain = info_gain(world, model, b, a)
        key = (-gain, expected_cost(world, model, b, a), i)
        if best_key is None or key < best_key:
            best, best_key = a, key
    if best_key[0] >= -1e-12:  # no action gains information
        return _fallback_action(world, model, b, actions)
    return best


def run_tbl(problem, groundtruth, params=None):
    """Interleaved planning and execution against a groundtruth pose."""
    params = params or TblParams()
    b = problem.b_start
    if groundtruth not in b.H:
        raise UnrealizableTask(
            f"groundtruth {groundtruth} not in the start hypothesis set"
        )
    steps = []
    total = 0
    while not is_goal(b) and len(steps) < params.step_cap:
        a = _choose_action(problem.world, problem.model, b, problem.actions)
        out = simulate_action(problem.world, problem.model, groundtruth, b.r, a)
        steps.append((b, a, out))
        total += out.cost
        b = belief_update(problem.world, problem.model, b, a,
                          Observation(out.r_next, out.contact))
    return ExecutionTrace(steps, total, b, is_goal(b))


def evaluate_tbl(problem, params=None):
    """Expected cost of the baseline over all hypotheses as groundtruth."""
    hyps = problem.b_start.H
    total = 0
    success = True
    for h in hyps:
        trace = run_tbl(problem, h, params=params)
        total += trace.total_cost
        success = success and trace.localized
    return Fraction(total, len(hyps)), success
