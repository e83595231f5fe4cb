"""Planning suite for active object localization using binary contacts.

The object of interest sits at one of finitely many candidate grid poses;
the robot moves and probes, using contact (or its absence) to eliminate
hypotheses until one remains. The package provides the belief-space model,
a real-time dynamic programming solver with experience reuse, a policy
database preprocessor, a myopic information-gain baseline, exact oracles,
and a benchmarking CLI.
"""

from .world import (
    Action,
    GridWorld,
    Hypothesis,
    ObjectModel,
    Outcome,
    Scenario,
    differing_cells,
    load_scenario,
    load_scenario_file,
    occupied,
    simulate_action,
)
from .belief import (
    BeliefState,
    Observation,
    Problem,
    SuccessorBranch,
    base_heuristic,
    belief_update,
    expected_cost,
    is_goal,
    pair_heuristic,
    successors,
)
from .solver import (
    SolveStats,
    SolverParams,
    bellman_backup,
    extract_history_policy,
    inflate,
    solve,
)
from .experience import (
    ExperienceMDP,
    experience_heuristic,
    naive_experience,
    precompute_values,
    query,
    rollout_experience,
)
from .policy import (
    ExecutionTrace,
    HistoryPolicy,
    evaluate_exact,
    execute,
    load_database,
    load_policy,
    save_database,
    save_policy,
)
from .preprocess import (
    PolicyDatabase,
    ProblemFamily,
    build_database,
    family_from_scenario,
    order_problems,
    select_experience,
)
from .oracle import oracle_optimal, reachable_beliefs, value_iteration_values
from .tbl import evaluate_tbl, info_gain, run_tbl
from .bench import generate_nested_scenarios, run_benchmark
from . import errors

__version__ = "0.1.0"
