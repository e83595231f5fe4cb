import math
from fractions import Fraction

import pytest

from contactloc.errors import UnrealizableTask
from contactloc.world import Action, Hypothesis
from contactloc.belief import BeliefState
from contactloc.tbl import evaluate_tbl, info_gain, run_tbl
from contactloc.oracle import oracle_optimal

MOVE_PX = Action("move", "+x")


def test_info_gain_full_split(line_world, line_model, H2):
    b = BeliefState.make((4, 0), H2)
    assert info_gain(line_world, line_model, b, MOVE_PX) == pytest.approx(1.0)


def test_info_gain_no_split(line_world, line_model, H2):
    b = BeliefState.make((0, 0), H2)
    assert info_gain(line_world, line_model, b, MOVE_PX) == pytest.approx(0.0)


def test_info_gain_partial_split(line_world, line_model, H3):
    b = BeliefState.make((4, 0), H3)
    expected = math.log2(3) - (2 / 3) * 1.0
    assert info_gain(line_world, line_model, b, MOVE_PX) == pytest.approx(expected)


def test_tbl_line_family(line_problem_h2):
    cost, ok = evaluate_tbl(line_problem_h2)
    assert ok and cost == Fraction(5)


def test_tbl_goal_start(line_world, line_model, line_actions):
    from contactloc.belief import Problem
    problem = Problem(line_world, line_model, line_actions,
                      BeliefState.make((0, 0), [Hypothesis(5, 0)]))
    cost, ok = evaluate_tbl(problem)
    assert ok and cost == 0


def test_tbl_respects_start_set(line_problem_h2):
    with pytest.raises(UnrealizableTask):
        run_tbl(line_problem_h2, Hypothesis(3, 0))


def test_tbl_trace_consistency(line_problem_h3):
    for h in line_problem_h3.b_start.H:
        trace = run_tbl(line_problem_h3, h)
        assert trace.localized
        assert trace.total_cost == sum(out.cost for _, _, out in trace.steps)
        assert trace.final_belief.H == (h,)


def test_tbl_never_beats_oracle(line_problem_h2, line_problem_h3, myopia_problem,
                                cluster_problems):
    for problem in [line_problem_h2, line_problem_h3, myopia_problem,
                    *cluster_problems]:
        cost, ok = evaluate_tbl(problem)
        assert ok
        optimum, _ = oracle_optimal(problem)
        assert cost >= optimum


def test_myopia_fixture(myopia_problem):
    cost, ok = evaluate_tbl(myopia_problem)
    assert ok and cost == Fraction(6)
    optimum, _ = oracle_optimal(myopia_problem)
    assert optimum == Fraction(4)
    assert float(cost / optimum) == pytest.approx(1.5)


def test_ratio_trend_non_decreasing(cluster_problems):
    ratios = []
    for problem in cluster_problems:
        cost, ok = evaluate_tbl(problem)
        assert ok
        optimum, _ = oracle_optimal(problem)
        ratios.append(cost / optimum)
    assert len(ratios) >= 3
    assert all(a <= b for a, b in zip(ratios, ratios[1:]))
    assert float(ratios[0]) == pytest.approx(1.5)
