"""Shared fixtures: the canonical line world, the large sweep family used by
the benchmark-style tests, and a seeded generator of small random instances.
"""

import random

import pytest

from contactloc.world import Action, GridWorld, Hypothesis, ObjectModel, footprint
from contactloc.belief import BeliefState, Problem, check_distinguishable
from contactloc.errors import IndistinguishableHypotheses
from contactloc.oracle import oracle_optimal
from contactloc.preprocess import ProblemFamily

SINGLE_CELL = ObjectModel(((0, 0),))


# ---------------------------------------------------------------------------
# Line world: 10x1 grid, single-cell object, robot at (0,0), unit moves only.
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def line_world():
    return GridWorld(10, 1)


@pytest.fixture(scope="session")
def line_model():
    return SINGLE_CELL


@pytest.fixture(scope="session")
def line_actions():
    return (Action("move", "+x"), Action("move", "-x"))


@pytest.fixture(scope="session")
def H2():
    return (Hypothesis(5, 0), Hypothesis(7, 0))


@pytest.fixture(scope="session")
def H3():
    return (Hypothesis(5, 0), Hypothesis(6, 0), Hypothesis(7, 0))


@pytest.fixture(scope="session")
def line_problem_h2(line_world, line_model, line_actions, H2):
    return Problem(line_world, line_model, line_actions,
                   BeliefState.make((0, 0), H2), "h2")


@pytest.fixture(scope="session")
def line_problem_h3(line_world, line_model, line_actions, H3):
    return Problem(line_world, line_model, line_actions,
                   BeliefState.make((0, 0), H3), "h3")


@pytest.fixture(scope="session")
def line_family(line_world, line_model, line_actions, H2, H3):
    return ProblemFamily(line_world, line_model, (0, 0), line_actions,
                         [("h2", H2), ("h3", H3)])


# ---------------------------------------------------------------------------
# Sweep family: one rotation pair that needs a probe excursion plus 50
# singleton sites resolved by a single guarded sweep, nested in 5 chunks.
# ---------------------------------------------------------------------------

def make_sweep_family():
    world = GridWorld(120, 8)
    model = ObjectModel(((0, 0), (6, 1)))
    actions = (Action("guarded", "+x", 119), Action("move", "+x"),
               Action("move", "-x"), Action("move", "+y"), Action("move", "-y"))
    pair = [Hypothesis(52, 0, 0), Hypothesis(52, 0, 90)]
    xs = list(range(54, 104))
    interleaved = []
    for i in range(5):
        interleaved += xs[i::5]
    chunks = [interleaved[i * 10:(i + 1) * 10] for i in range(5)]
    sets, current = [], list(pair)
    sets.append(("s002", tuple(sorted(current))))
    for chunk in chunks:
        current = current + [Hypothesis(x, 0, 0) for x in chunk]
        sets.append((f"s{len(current):03d}", tuple(sorted(current))))
    return ProblemFamily(world, model, (0, 0), actions, sets)


@pytest.fixture(scope="session")
def sweep_family():
    return make_sweep_family()


# ---------------------------------------------------------------------------
# Myopic-baseline fixtures.
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def myopia_problem():
    world = GridWorld(16, 1)
    actions = (Action("move", "+x"), Action("move", "-x"),
               Action("guarded", "+x", 15), Action("guarded", "-x", 15))
    H = (Hypothesis(2, 0), Hypothesis(12, 0))
    return Problem(world, SINGLE_CELL, actions, BeliefState.make((8, 0), H), "myopia")


@pytest.fixture(scope="session")
def cluster_problems():
    """Nested two-cluster instances whose greedy/optimal cost ratio grows."""
    world = GridWorld(16, 3)
    actions = (Action("move", "+x"), Action("move", "-x"),
               Action("move", "+y"), Action("move", "-y"),
               Action("guarded", "+x", 15), Action("guarded", "-x", 15))
    levels = [
        [(2, 1), (12, 1)],
        [(2, 1), (2, 2), (12, 1)],
        [(2, 0), (2, 1), (2, 2), (12, 1)],
    ]
    return [
        Problem(world, SINGLE_CELL, actions,
                BeliefState.make((8, 1), [Hypothesis(x, y) for x, y in level]),
                f"cluster{len(level)}")
        for level in levels
    ]


# ---------------------------------------------------------------------------
# Seeded random small instances (grids <= 10x8, |H| 2..6, optional rotation).
# ---------------------------------------------------------------------------

SHAPES = [((0, 0),), ((0, 0), (1, 0)), ((0, 0), (1, 0), (0, 1))]


def generate_instances(count=20, seed=7):
    """Each instance is a 2-problem nested family (sub, full) plus the exact
    oracle optimum of the full problem."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        width = rng.randint(5, 10)
        height = rng.choice([1, rng.randint(3, 8)])
        world = GridWorld(width, height)
        model = ObjectModel(rng.choice(SHAPES))
        rots = (0, 90, 180, 270) if rng.random() < 0.5 and height > 1 else (0,)
        n = rng.randint(2, 6)
        hyps = set()
        for _ in range(200):
            if len(hyps) >= n:
                break
            h = Hypothesis(rng.randrange(width), rng.randrange(height), rng.choice(rots))
            cells = footprint(model, h)
            if not all(world.in_bounds(c) for c in cells):
                continue
            if (0, 0) in cells:
                continue
            if any(footprint(model, h2) == cells for h2 in hyps):
                continue
            hyps.add(h)
        if len(hyps) < 2:
            continue
        full = tuple(sorted(hyps))
        sub = full[:max(1, len(full) // 2)]
        if sub == full:
            continue
        actions = [Action("move", "+x"), Action("move", "-x")]
        if height > 1:
            actions += [Action("move", "+y"), Action("move", "-y")]
        actions.append(Action("guarded", "+x", width - 1))
        family = ProblemFamily(world, model, (0, 0), tuple(actions),
                               [("sub", sub), ("full", full)])
        problem = family.problem("full", full)
        try:
            check_distinguishable(model, full)
            optimum, _ = oracle_optimal(problem)
        except (IndistinguishableHypotheses, RuntimeError):
            continue
        out.append((family, problem, optimum))
    return out


@pytest.fixture(scope="session")
def random_instances():
    return generate_instances()
