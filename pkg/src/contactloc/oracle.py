"""Exact ground truth for expected localization cost.

Two independent implementations guard each other: a layered decomposition
solved with uniform-cost search per hypothesis set (exact rationals), and a
plain value-iteration sweep over the reachable belief space (floats). All
derived expectations in the test suite flow through the first and are
cross-checked against the second.
"""

from collections import defaultdict, deque
from fractions import Fraction
import heapq
import itertools

from .belief import (
    BeliefState,
    check_distinguishable,
    is_goal,
    successors,
)


def reachable_beliefs(problem):
    """All beliefs reachable from the start under any action sequence."""
    start = problem.b_start
    seen = {start.encode(): start}
    queue = deque([start])
    while queue:
        b = queue.popleft()
        if is_goal(b):
            continue
        for a in problem.actions:
            for br in successors(problem.world, problem.model, b, a):
                key = br.b_next.encode()
                if key not in seen:
                    seen[key] = br.b_next
                    queue.append(br.b_next)
    return seen


def oracle_optimal(problem):
    """Exact optimal expected cost and per-belief values, as Fractions.

    Hypothesis sets are processed in increasing size. Within one set, actions
    that do not split it form a deterministic shortest-path problem whose
    terminal costs come from splitting actions, already valued on smaller
    sets; each layer is solved with Dijkstra over reversed move edges.
    """
    check_distinguishable(problem.model, problem.b_start.H)
    world, model = problem.world, problem.model
    beliefs = reachable_beliefs(problem)

    by_set = defaultdict(list)
    for b in beliefs.values():
        by_set[b.H].append(b)

    values = {}
    for H in sorted(by_set, key=lambda H: (len(H), H)):
        layer = by_set[H]
        if len(H) == 1:
            for b in layer:
                values[b.encode()] = Fraction(0)
            continue
        seeds = {}
        reverse = defaultdict(list)  # r_next -> [(r, move cost)]
        for b in layer:
            for a in problem.actions:
                branches = successors(world, model, b, a)
                if len(branches) == 1:
                    br = branches[0]
                    if br.b_next.r != b.r:
                        reverse[br.b_next.r].append((b.r, br.branch_cost))
                else:
                    q = Fraction(0)
                    for br in branches:
                        q += br.prob * (br.branch_cost + values[br.b_next.encode()])
                    if b.r not in seeds or q < seeds[b.r]:
                        seeds[b.r] = q
        dist = {}
        counter = itertools.count()
        heap = [(q, next(counter), r) for r, q in seeds.items()]
        heapq.heapify(heap)
        while heap:
            d, _, r = heapq.heappop(heap)
            if r in dist:
                continue
            dist[r] = d
            for r_prev, cost in reverse[r]:
                if r_prev not in dist:
                    heapq.heappush(heap, (d + cost, next(counter), r_prev))
        for b in layer:
            if b.r in dist:
                values[b.encode()] = dist[b.r]
    start_key = problem.b_start.encode()
    if start_key not in values:
        raise RuntimeError("goal unreachable from the start belief")
    return values[start_key], values


def value_iteration_values(problem, tol=1e-15, max_sweeps=200_000):
    """Independent oracle: Gauss-Seidel value iteration over the reachable
    belief space, starting from zero (an underestimate) and sweeping until
    the largest update falls below tol."""
    check_distinguishable(problem.model, problem.b_start.H)
    world, model = problem.world, problem.model
    beliefs = reachable_beliefs(problem)
    order = sorted(beliefs)
    values = {k: 0.0 for k in order}
    for _ in range(max_sweeps):
        delta = 0.0
        for key in order:
            b = beliefs[key]
            if is_goal(b):
                continue
            best = None
            for a in problem.actions:
                q = 0.0
                for br in successors(world, model, b, a):
                    succ = values[br.b_next.encode()]
                    q += float(br.prob) * (br.branch_cost + succ)
                if best is None or q < best:
                    best = q
            delta = max(delta, abs(best - values[key]))
            values[key] = best
        if delta <= tol:
            break
    return values
