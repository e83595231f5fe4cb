"""History-indexed policies: lookup, exact evaluation, closed-loop execution,
and a canonical JSON codec.

Histories are sequences of (action, observation) pairs. Keying policies by
history rather than by belief is what lets a solution transfer to a problem
with a different start uncertainty: the same history denotes a different
belief there, but the recorded action still applies.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json

from .errors import PolicyFormatError, UnrealizableTask
from .world import Action, Hypothesis, simulate_action
from .belief import BeliefState, Observation, belief_update, is_goal

FORMAT_VERSION = 1


def encode_history(history):
    return ";".join(f"a:{a.encode()}/z:{z.encode()}" for a, z in history)


def decode_history(text):
    if text == "":
        return ()
    steps = []
    for part in text.split(";"):
        try:
            a_part, z_part = part.split("/")
            if not a_part.startswith("a:") or not z_part.startswith("z:"):
                raise ValueError(part)
            steps.append((Action.decode(a_part[2:]), Observation.decode(z_part[2:])))
        except ValueError as e:
            raise PolicyFormatError(f"bad history step {part!r}: {e}")
    return tuple(steps)


@dataclass
class HistoryPolicy:
    table: dict  # history tuple -> Action
    b_start: BeliefState
    meta: dict = field(default_factory=dict)

    def lookup(self, history):
        return self.table.get(history)


@dataclass
class ExecutionTrace:
    steps: list  # (belief, action, outcome)
    total_cost: int
    final_belief: BeliefState
    localized: bool


def execute(problem, policy, groundtruth, depth_cap=10_000):
    """Closed-loop run of a policy against a groundtruth pose.

    Stops at the goal, at a history with no recorded action, or at the depth
    cap; a missing action is reported via localized=False, not raised.
    """
    if groundtruth not in policy.b_start.H:
        raise UnrealizableTask(
            f"groundtruth {groundtruth} not in the start hypothesis set"
        )
    b = policy.b_start
    history = ()
    steps = []
    total = 0
    while not is_goal(b) and len(steps) < depth_cap:
        a = policy.lookup(history)
        if a is None:
            break
        out = simulate_action(problem.world, problem.model, groundtruth, b.r, a)
        z = Observation(out.r_next, out.contact)
        steps.append((b, a, out))
        total += out.cost
        history = history + ((a, z),)
        b = belief_update(problem.world, problem.model, b, a, z)
    return ExecutionTrace(steps, total, b, is_goal(b))


def evaluate_exact(problem, policy, depth_cap=10_000):
    """Expected closed-loop cost over all hypotheses as groundtruth.

    Returns (expected_cost as an exact Fraction, success). Success requires
    every hypothesis branch to reach a goal belief with no missing lookup.
    """
    hyps = policy.b_start.H
    total = 0
    success = True
    for h in hyps:
        trace = execute(problem, policy, h, depth_cap=depth_cap)
        total += trace.total_cost
        success = success and trace.localized
    return Fraction(total, len(hyps)), success


# ---------------------------------------------------------------------------
# Codec
# ---------------------------------------------------------------------------

def policy_to_doc(policy):
    meta = policy.meta
    return {
        "format_version": FORMAT_VERSION,
        "scenario_id": meta.get("scenario_id", ""),
        "solver": meta.get("solver", "rtdp"),
        "epsilon": float(meta.get("epsilon", 1.0)),
        "b_start": {
            "r": list(policy.b_start.r),
            "H": [[h.x, h.y, h.rot] for h in policy.b_start.H],
        },
        "entries": sorted(
            (
                {"history": encode_history(hist), "action": a.encode()}
                for hist, a in policy.table.items()
            ),
            key=lambda e: e["history"],
        ),
        "stats": meta.get("stats", {}),
    }


def policy_from_doc(doc):
    if not isinstance(doc, dict):
        raise PolicyFormatError("policy document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise PolicyFormatError(
            f"format_version: expected {FORMAT_VERSION}, got {version!r}"
        )
    try:
        bs = doc["b_start"]
        b_start = BeliefState.make(
            tuple(bs["r"]), [Hypothesis(*p) for p in bs["H"]]
        )
        table = {
            decode_history(e["history"]): Action.decode(e["action"])
            for e in doc["entries"]
        }
    except (KeyError, TypeError, ValueError) as e:
        raise PolicyFormatError(f"malformed policy document: {e}")
    meta = {
        "scenario_id": doc.get("scenario_id", ""),
        "solver": doc.get("solver", "rtdp"),
        "epsilon": doc.get("epsilon", 1.0),
        "stats": doc.get("stats", {}),
    }
    return HistoryPolicy(table, b_start, meta)


def dumps_canonical(doc):
    """Canonical byte form: sorted keys, no whitespace, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save_policy(policy, path):
    with open(path, "w") as f:
        f.write(dumps_canonical(policy_to_doc(policy)))


def load_policy(path):
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise PolicyFormatError(f"invalid JSON: {e}")
    return policy_from_doc(doc)


def database_to_doc(entries):
    """entries: iterable of (scenario_id, HistoryPolicy)."""
    policies = []
    index = {}
    for sid, pol in entries:
        index[sid] = len(policies)
        doc = policy_to_doc(pol)
        doc["scenario_id"] = sid
        policies.append(doc)
    return {"format_version": FORMAT_VERSION, "index": index, "policies": policies}


def database_from_doc(doc):
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise PolicyFormatError("unrecognized database document")
    out = []
    for pdoc in doc.get("policies", []):
        pol = policy_from_doc(pdoc)
        out.append((pdoc.get("scenario_id", ""), pol))
    return out


def save_database(entries, path):
    with open(path, "w") as f:
        f.write(dumps_canonical(database_to_doc(entries)))


def load_database(path):
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise PolicyFormatError(f"invalid JSON: {e}")
    return database_from_doc(doc)
