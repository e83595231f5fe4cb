"""Experience reuse: harvest belief-space structure from prior policies and
answer heuristic queries against it.

A prior solution policy, rolled out from the new problem's start belief,
yields a small belief MDP whose transitions carry their true costs. Jumping
anywhere else is penalized by epsilon, so the resulting heuristic pulls the
search toward the harvested structure whenever that plausibly shortens the
route to a goal.
"""

from dataclasses import dataclass, field
from collections import deque
import math

from .belief import base_heuristic, is_goal, pair_heuristic, successors


@dataclass
class ExperienceMDP:
    model: object
    nodes: dict = field(default_factory=dict)   # encoding -> BeliefState (non-goal)
    edges: list = field(default_factory=list)   # (BeliefState, Action, branches)
    values: dict = field(default_factory=dict)  # encoding -> float
    epsilon: float = 1.0


def rollout_experience(problem, policy, b_start):
    """Roll a history policy out from b_start, branching on every observation.

    Histories absent from the policy become leaves; goal beliefs terminate
    their branch and are never stored as nodes.
    """
    exp = ExperienceMDP(model=problem.model)
    queue = deque()
    if not is_goal(b_start):
        queue.append(((), b_start))
        exp.nodes[b_start.encode()] = b_start
    while queue:
        history, b = queue.popleft()
        a = policy.lookup(history)
        if a is None:
            continue  # leaf: the source policy has nothing to say here
        branches = successors(problem.world, problem.model, b, a)
        exp.edges.append((b, a, branches))
        for br in branches:
            if is_goal(br.b_next):
                continue
            key = br.b_next.encode()
            if key not in exp.nodes:
                exp.nodes[key] = br.b_next
            queue.append((history + ((a, br.z),), br.b_next))
    return exp


def naive_experience(problem, policy):
    """Ablation variant: roll the policy out from its own original start."""
    return rollout_experience(problem, policy, policy.b_start)


def precompute_values(exp, epsilon):
    """Fix-point of the experience-value recursion over the harvested nodes.

    Values start at epsilon * base_heuristic and only decrease; each sweep
    re-minimizes over the inflated jump-to-goal bound, inflated jumps to other
    nodes, and real experience edges (goal successors contribute 0). Stops
    when a full sweep moves no value by more than 1e-12.
    """
    if epsilon < 1:
        raise ValueError("epsilon must be >= 1")
    exp.epsilon = epsilon
    model = exp.model
    values = {k: epsilon * base_heuristic(model, b) for k, b in exp.nodes.items()}
    out_edges = {}
    for b, a, branches in exp.edges:
        out_edges.setdefault(b.encode(), []).append(branches)

    node_items = sorted(exp.nodes.items())
    while True:
        delta = 0.0
        for key, b in node_items:
            v = epsilon * base_heuristic(model, b)
            for key2, b2 in node_items:
                if key2 == key:
                    continue
                jump = pair_heuristic(b, b2)
                if math.isfinite(jump):
                    v = min(v, epsilon * jump + values[key2])
            for branches in out_edges.get(key, []):
                q = 0.0
                for br in branches:
                    succ = 0.0 if is_goal(br.b_next) else values[br.b_next.encode()]
                    q += float(br.prob) * (br.branch_cost + succ)
                v = min(v, q)
            if v < values[key]:
                delta = max(delta, values[key] - v)
                values[key] = v
        if delta <= 1e-12:
            break
    exp.values = values
    return exp


def query(exp, b):
    """Experience-heuristic value for an arbitrary belief: one linear pass
    over the harvested nodes (O(|nodes|) per query)."""
    if is_goal(b):
        return 0.0
    eps = exp.epsilon
    best = eps * base_heuristic(exp.model, b)
    for key, b2 in exp.nodes.items():
        jump = pair_heuristic(b, b2)
        if math.isfinite(jump):
            best = min(best, eps * jump + exp.values[key])
    return best


def experience_heuristic(exp):
    return lambda b: query(exp, b)
