"""Belief MDP layer: belief states, successor branches, update, heuristics.

A belief is a robot cell plus a uniform, canonically sorted hypothesis set.
Observations carry the post-action robot cell and the binary contact flag;
hypotheses inconsistent with an observation are eliminated, which is the only
mechanism that reduces uncertainty.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

from .errors import IndistinguishableHypotheses, UnrealizableTask
from . import world as W


@dataclass(frozen=True)
class BeliefState:
    r: tuple
    H: tuple  # sorted, duplicate-free tuple of Hypothesis

    @staticmethod
    def make(r, hyps):
        canon = tuple(sorted(set(hyps)))
        if not canon:
            raise UnrealizableTask("belief with empty hypothesis set")
        return BeliefState(tuple(r), canon)

    def encode(self):
        hs = ";".join(f"{h.x},{h.y},{h.rot}" for h in self.H)
        return f"r={self.r[0]},{self.r[1]}|H={hs}"


@dataclass(frozen=True)
class Observation:
    r_obs: tuple
    contact: bool

    def encode(self):
        return f"{self.r_obs[0]},{self.r_obs[1]},{int(self.contact)}"

    @staticmethod
    def decode(text):
        x, y, c = text.split(",")
        return Observation((int(x), int(y)), bool(int(c)))


@dataclass(frozen=True)
class SuccessorBranch:
    z: Observation
    b_next: BeliefState
    prob: Fraction
    branch_cost: int


@dataclass(frozen=True)
class Problem:
    """One localization planning instance."""
    world: W.GridWorld
    model: W.ObjectModel
    actions: tuple
    b_start: BeliefState
    scenario_id: str = ""


def is_goal(b):
    return len(b.H) == 1


@lru_cache(maxsize=None)
def successors(world, model, b, a):
    """Branches of executing a from b, grouped by per-hypothesis outcome.

    The hypothesis groups partition H(b); probabilities are exact rationals
    |group| / |H(b)|.
    """
    groups = {}
    for h in b.H:
        out = W.simulate_action(world, model, h, b.r, a)
        groups.setdefault(out, []).append(h)
    n = len(b.H)
    branches = []
    for out in sorted(groups, key=lambda o: (o.r_next, o.contact)):
        hyps = groups[out]
        branches.append(SuccessorBranch(
            z=Observation(out.r_next, out.contact),
            b_next=BeliefState.make(out.r_next, hyps),
            prob=Fraction(len(hyps), n),
            branch_cost=out.cost,
        ))
    return tuple(branches)


def belief_update(world, model, b, a, z):
    """Hypothesis elimination: keep the branch of (b, a) matching z."""
    for br in successors(world, model, b, a):
        if br.z == z:
            return br.b_next
    raise UnrealizableTask(
        f"observation {z} from belief {b.encode()} matches no hypothesis"
    )


def expected_cost(world, model, b, a):
    return sum(br.prob * br.branch_cost for br in successors(world, model, b, a))


def base_heuristic(model, b):
    """Admissible cost-to-go floor: travel to the nearest cell whose occupancy
    distinguishes some pair of hypotheses, then at least one probe attempt."""
    if is_goal(b):
        return 0
    diff = W.differing_cells(model, b.H)
    if not diff:
        raise IndistinguishableHypotheses(
            f"hypotheses {b.H} share identical footprints"
        )
    return min(max(W.manhattan(b.r, c), 1) for c in diff)


def pair_heuristic(b, b2):
    """Lower bound on the cost of reaching b2 from b.

    Hypotheses are never re-added, so a belief whose hypothesis set is not a
    subset of H(b) is unreachable.
    """
    if not set(b2.H) <= set(b.H):
        return math.inf
    return W.manhattan(b.r, b2.r)


def check_distinguishable(model, hyps):
    """Raise unless every pair of hypotheses differs somewhere."""
    prints = [W.footprint(model, h) for h in hyps]
    seen = {}
    for h, p in zip(hyps, prints):
        if p in seen:
            raise IndistinguishableHypotheses(
                f"hypotheses {seen[p]} and {h} have identical footprints"
            )
        seen[p] = h
