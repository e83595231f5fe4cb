"""Grid worlds, object models, hypothesis poses and guarded-move simulation.

Cells are (x, y) integer tuples. The grid boundary and static obstacles act
as known walls: they block motion under every hypothesis and therefore carry
no information. Rotations are limited to quarter turns so occupancy stays
exact on the grid.
"""

from dataclasses import dataclass, field
from fractions import Fraction  # noqa: F401  (re-exported convenience for callers)
from functools import lru_cache
import json

from .errors import ScenarioError

DIRECTIONS = {
    "+x": (1, 0),
    "-x": (-1, 0),
    "+y": (0, 1),
    "-y": (0, -1),
}

ROTATIONS = (0, 90, 180, 270)


@dataclass(frozen=True)
class GridWorld:
    width: int
    height: int
    static_obstacles: frozenset = frozenset()

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be >= 1")
        for c in self.static_obstacles:
            if not self.in_bounds(c):
                raise ValueError(f"static obstacle {c} outside grid")

    def in_bounds(self, cell):
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_obstacle(self, cell):
        return cell in self.static_obstacles


@dataclass(frozen=True)
class ObjectModel:
    offsets: tuple

    def __post_init__(self):
        offs = tuple(sorted(set(map(tuple, self.offsets))))
        if not offs:
            raise ValueError("object model must have at least one cell")
        object.__setattr__(self, "offsets", offs)


@dataclass(frozen=True, order=True)
class Hypothesis:
    x: int
    y: int
    rot: int = 0

    def __post_init__(self):
        if self.rot not in ROTATIONS:
            raise ValueError(f"rotation must be one of {ROTATIONS}, got {self.rot}")


@dataclass(frozen=True)
class Action:
    kind: str  # "move" | "guarded"
    direction: str
    max_steps: int = 1

    def __post_init__(self):
        if self.kind not in ("move", "guarded"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.kind == "move" and self.max_steps != 1:
            raise ValueError("move actions are single-step")

    def encode(self):
        return f"{self.kind},{self.direction},{self.max_steps}"

    @staticmethod
    def decode(text):
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"bad action encoding {text!r}")
        return Action(parts[0], parts[1], int(parts[2]))


@dataclass(frozen=True)
class Outcome:
    r_next: tuple
    contact: bool
    cost: int


def rotate_offset(offset, rot):
    dx, dy = offset
    if rot == 0:
        return (dx, dy)
    if rot == 90:
        return (-dy, dx)
    if rot == 180:
        return (-dx, -dy)
    if rot == 270:
        return (dy, -dx)
    raise ValueError(f"bad rotation {rot}")


@lru_cache(maxsize=None)
def footprint(model, h):
    """Cells occupied by the object under hypothesis pose h."""
    return frozenset(
        (h.x + dx, h.y + dy)
        for dx, dy in (rotate_offset(o, h.rot) for o in model.offsets)
    )


def occupied(model, h, cell):
    return cell in footprint(model, h)


def blocked(world, model, h, cell):
    """True if the robot cannot enter cell under hypothesis h."""
    return (
        not world.in_bounds(cell)
        or world.is_obstacle(cell)
        or cell in footprint(model, h)
    )


def simulate_action(world, model, h, r, a):
    """Deterministic per-hypothesis outcome of executing a from cell r.

    A blocked attempt leaves the robot in place and costs 1; guarded moves
    advance until contact or the step limit.
    """
    if blocked(world, model, h, r):
        raise ValueError(f"robot cell {r} is occupied under hypothesis {h}")
    dx, dy = DIRECTIONS[a.direction]
    steps = a.max_steps if a.kind == "guarded" else 1
    cur = r
    moved = 0
    for _ in range(steps):
        nxt = (cur[0] + dx, cur[1] + dy)
        if blocked(world, model, h, nxt):
            return Outcome(cur, True, moved + 1)
        cur = nxt
        moved += 1
    return Outcome(cur, False, max(moved, 1))


@lru_cache(maxsize=None)
def differing_cells(model, hyps):
    """Cells whose occupancy differs between at least two hypotheses in hyps.

    Every differing cell lies inside the grid because hypothesis footprints do.
    """
    if not hyps:
        raise ValueError("hypothesis set must be non-empty")
    prints = [footprint(model, h) for h in hyps]
    union = frozenset().union(*prints)
    inter = prints[0]
    for p in prints[1:]:
        inter = inter & p
    return union - inter


def manhattan(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------

@dataclass
class Scenario:
    """A validated scenario: world geometry plus the problem family inputs."""
    world: GridWorld
    model: ObjectModel
    r_start: tuple
    actions: tuple
    uncertainty_sets: list  # list of (set_id, tuple of Hypothesis)
    groundtruth: Hypothesis = None
    name: str = ""
    extra: dict = field(default_factory=dict)


def _require(doc, key, path, types):
    if key not in doc:
        raise ScenarioError(f"{path}.{key}", "missing required key")
    val = doc[key]
    if not isinstance(val, types):
        raise ScenarioError(f"{path}.{key}", f"expected {types}, got {type(val).__name__}")
    return val


def _parse_cell(obj, path):
    if (not isinstance(obj, (list, tuple))) or len(obj) != 2:
        raise ScenarioError(path, "expected a [x, y] pair")
    x, y = obj
    if not isinstance(x, int) or not isinstance(y, int):
        raise ScenarioError(path, "cell coordinates must be integers")
    return (x, y)


def _parse_pose(obj, path):
    if isinstance(obj, dict):
        x = _require(obj, "x", path, int)
        y = _require(obj, "y", path, int)
        rot = obj.get("rot", 0)
    elif isinstance(obj, (list, tuple)) and len(obj) in (2, 3):
        x, y = obj[0], obj[1]
        rot = obj[2] if len(obj) == 3 else 0
    else:
        raise ScenarioError(path, "expected a pose {x, y, rot}")
    if rot not in ROTATIONS:
        raise ScenarioError(f"{path}.rot", f"rotation must be one of {ROTATIONS}")
    return Hypothesis(x, y, rot)


def _parse_action(obj, path):
    kind = _require(obj, "kind", path, str)
    direction = _require(obj, "direction", path, str)
    max_steps = obj.get("max_steps", 1)
    try:
        return Action(kind, direction, max_steps)
    except ValueError as e:
        raise ScenarioError(path, str(e))


def load_scenario(doc, name=""):
    """Validate a scenario document and build the corresponding objects.

    Raises ScenarioError naming the offending key path on any violation.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("$", "scenario document must be a JSON object")
    grid = _require(doc, "grid", "$", dict)
    width = _require(grid, "width", "$.grid", int)
    height = _require(grid, "height", "$.grid", int)
    if width < 1 or height < 1:
        raise ScenarioError("$.grid", "width and height must be >= 1")
    obstacles = set()
    for i, c in enumerate(grid.get("static_obstacles", [])):
        cell = _parse_cell(c, f"$.grid.static_obstacles[{i}]")
        if not (0 <= cell[0] < width and 0 <= cell[1] < height):
            raise ScenarioError(f"$.grid.static_obstacles[{i}]", "obstacle out of bounds")
        obstacles.add(cell)
    world = GridWorld(width, height, frozenset(obstacles))

    obj = _require(doc, "object", "$", dict)
    offsets = _require(obj, "offsets", "$.object", list)
    if not offsets:
        raise ScenarioError("$.object.offsets", "object model is empty")
    model = ObjectModel(tuple(
        _parse_cell(o, f"$.object.offsets[{i}]") for i, o in enumerate(offsets)
    ))

    rs = _require(doc, "robot_start", "$", dict)
    r_start = (_require(rs, "x", "$.robot_start", int), _require(rs, "y", "$.robot_start", int))
    if not world.in_bounds(r_start):
        raise ScenarioError("$.robot_start", "robot start out of bounds")
    if world.is_obstacle(r_start):
        raise ScenarioError("$.robot_start", "robot start inside a static obstacle")

    actions = tuple(
        _parse_action(a, f"$.actions[{i}]")
        for i, a in enumerate(_require(doc, "actions", "$", list))
    )
    if not actions:
        raise ScenarioError("$.actions", "action set must be non-empty")

    def check_pose(h, path):
        for cell in footprint(model, h):
            if not world.in_bounds(cell):
                raise ScenarioError(path, f"pose out of bounds (cell {cell})")
        if r_start in footprint(model, h):
            raise ScenarioError(path, "robot start lies inside the object")

    sets = []
    for i, hyps in enumerate(doc.get("uncertainty_sets", [])):
        if not isinstance(hyps, list) or not hyps:
            raise ScenarioError(f"$.uncertainty_sets[{i}]", "expected a non-empty list of poses")
        parsed = []
        for j, p in enumerate(hyps):
            h = _parse_pose(p, f"$.uncertainty_sets[{i}][{j}]")
            check_pose(h, f"$.uncertainty_sets[{i}][{j}]")
            parsed.append(h)
        canon = tuple(sorted(set(parsed)))
        sets.append((f"set{i:03d}", canon))

    groundtruth = None
    if "groundtruth" in doc:
        groundtruth = _parse_pose(doc["groundtruth"], "$.groundtruth")
        check_pose(groundtruth, "$.groundtruth")

    return Scenario(world, model, r_start, actions, sets, groundtruth, name=name,
                    extra={k: doc[k] for k in doc if k.startswith("_")})


def load_scenario_file(path):
    with open(path) as f:
        doc = json.load(f)
    return load_scenario(doc, name=str(path))


def scenario_to_doc(scenario):
    """Inverse of load_scenario, used by the scenario generator CLI."""
    doc = {
        "grid": {
            "width": scenario.world.width,
            "height": scenario.world.height,
            "static_obstacles": [list(c) for c in sorted(scenario.world.static_obstacles)],
        },
        "object": {"offsets": [list(o) for o in scenario.model.offsets]},
        "robot_start": {"x": scenario.r_start[0], "y": scenario.r_start[1]},
        "actions": [
            {"kind": a.kind, "direction": a.direction, "max_steps": a.max_steps}
            for a in scenario.actions
        ],
        "uncertainty_sets": [
            [{"x": h.x, "y": h.y, "rot": h.rot} for h in hyps]
            for _, hyps in scenario.uncertainty_sets
        ],
    }
    if scenario.groundtruth is not None:
        g = scenario.groundtruth
        doc["groundtruth"] = {"x": g.x, "y": g.y, "rot": g.rot}
    return doc
