import pytest

from contactloc.errors import ScenarioError
from contactloc.world import (
    Action,
    GridWorld,
    Hypothesis,
    ObjectModel,
    differing_cells,
    footprint,
    load_scenario,
    occupied,
    rotate_offset,
    scenario_to_doc,
    simulate_action,
)

L_SHAPE = ObjectModel(((0, 0), (1, 0), (0, 1)))


def test_grid_bounds_and_obstacles():
    world = GridWorld(4, 3, frozenset({(1, 1)}))
    assert world.in_bounds((0, 0)) and world.in_bounds((3, 2))
    assert not world.in_bounds((4, 0)) and not world.in_bounds((0, -1))
    assert world.is_obstacle((1, 1)) and not world.is_obstacle((0, 0))


def test_invalid_world_rejected():
    with pytest.raises(ValueError):
        GridWorld(0, 3)
    with pytest.raises(ValueError):
        GridWorld(3, 3, frozenset({(5, 0)}))


def test_hypothesis_rotation_validation():
    with pytest.raises(ValueError):
        Hypothesis(0, 0, 45)


def test_action_validation():
    with pytest.raises(ValueError):
        Action("teleport", "+x")
    with pytest.raises(ValueError):
        Action("move", "+z")
    with pytest.raises(ValueError):
        Action("move", "+x", 3)
    with pytest.raises(ValueError):
        Action("guarded", "+x", 0)


def test_occupied_single_cell(line_model):
    h = Hypothesis(5, 0)
    assert occupied(line_model, h, (5, 0))
    assert not occupied(line_model, h, (4, 0))


def test_rotated_footprint_matches_brute_force():
    h = Hypothesis(3, 3, 90)
    expected = {
        (3 + dx, 3 + dy)
        for dx, dy in (rotate_offset(o, 90) for o in L_SHAPE.offsets)
    }
    assert footprint(L_SHAPE, h) == expected
    # quarter-turn of the L: (1,0) -> (0,1), (0,1) -> (-1,0)
    assert footprint(L_SHAPE, h) == {(3, 3), (3, 4), (2, 3)}


def test_rotation_composition():
    for off in ((1, 0), (0, 1), (2, 1)):
        assert rotate_offset(rotate_offset(off, 90), 90) == rotate_offset(off, 180)
        assert rotate_offset(off, 270) == rotate_offset(rotate_offset(off, 180), 90)


def test_simulate_move_contact(line_world, line_model):
    out = simulate_action(line_world, line_model, Hypothesis(5, 0), (4, 0),
                          Action("move", "+x"))
    assert (out.r_next, out.contact, out.cost) == ((4, 0), True, 1)


def test_simulate_move_free(line_world, line_model):
    out = simulate_action(line_world, line_model, Hypothesis(7, 0), (4, 0),
                          Action("move", "+x"))
    assert (out.r_next, out.contact, out.cost) == ((5, 0), False, 1)


def test_boundary_is_known_wall(line_world, line_model):
    for h in (Hypothesis(5, 0), Hypothesis(7, 0)):
        out = simulate_action(line_world, line_model, h, (0, 0), Action("move", "-x"))
        assert (out.r_next, out.contact, out.cost) == ((0, 0), True, 1)


def test_guarded_move_stops_at_contact(line_world, line_model):
    out = simulate_action(line_world, line_model, Hypothesis(5, 0), (0, 0),
                          Action("guarded", "+x", 9))
    assert (out.r_next, out.contact, out.cost) == ((4, 0), True, 5)


def test_guarded_move_step_limit(line_world, line_model):
    out = simulate_action(line_world, line_model, Hypothesis(7, 0), (0, 0),
                          Action("guarded", "+x", 3))
    assert (out.r_next, out.contact, out.cost) == ((3, 0), False, 3)


def test_guarded_one_step_equals_move(line_world, line_model):
    for h in (Hypothesis(5, 0), Hypothesis(7, 0)):
        for r in [(x, 0) for x in range(10) if x not in (h.x,)]:
            for d in ("+x", "-x"):
                a = simulate_action(line_world, line_model, h, r, Action("move", d))
                g = simulate_action(line_world, line_model, h, r, Action("guarded", d, 1))
                assert a == g


def test_cost_at_least_one(line_world, line_model):
    for h in (Hypothesis(5, 0), Hypothesis(7, 0)):
        for r in [(x, 0) for x in range(10) if x != h.x]:
            for a in (Action("move", "+x"), Action("guarded", "-x", 9)):
                assert simulate_action(line_world, line_model, h, r, a).cost >= 1


def test_robot_inside_object_rejected(line_world, line_model):
    with pytest.raises(ValueError):
        simulate_action(line_world, line_model, Hypothesis(5, 0), (5, 0),
                        Action("move", "+x"))


def test_differing_cells(line_model, H2, H3):
    assert differing_cells(line_model, H2) == {(5, 0), (7, 0)}
    assert differing_cells(line_model, H3) == {(5, 0), (6, 0), (7, 0)}
    assert differing_cells(line_model, (Hypothesis(5, 0),)) == frozenset()


def test_outcomes_differ_iff_swept_cells_differ(line_world, line_model, H2):
    # Exhaustive over the line world: two hypotheses give different outcomes
    # exactly when the action's attempted cells include a differing cell.
    h1, h2 = H2
    diff = differing_cells(line_model, H2)
    for x in range(10):
        if x in (h1.x, h2.x):
            continue
        for a in (Action("move", "+x"), Action("move", "-x"),
                  Action("guarded", "+x", 9), Action("guarded", "-x", 9)):
            o1 = simulate_action(line_world, line_model, h1, (x, 0), a)
            o2 = simulate_action(line_world, line_model, h2, (x, 0), a)
            swept = set()
            cur, step = (x, 0), {"+x": (1, 0), "-x": (-1, 0)}[a.direction]
            for _ in range(a.max_steps if a.kind == "guarded" else 1):
                cur = (cur[0] + step[0], cur[1] + step[1])
                swept.add(cur)
                if cur in (footprint(line_model, h1) | footprint(line_model, h2)):
                    break
            assert (o1 != o2) == bool(swept & diff)


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------

def line_doc():
    return {
        "grid": {"width": 10, "height": 1},
        "object": {"offsets": [[0, 0]]},
        "robot_start": {"x": 0, "y": 0},
        "actions": [{"kind": "move", "direction": "+x"},
                    {"kind": "move", "direction": "-x"}],
        "uncertainty_sets": [
            [{"x": 5, "y": 0}, {"x": 7, "y": 0}],
            [{"x": 5, "y": 0}, {"x": 6, "y": 0}, {"x": 7, "y": 0}],
        ],
    }


def test_load_scenario_line():
    sc = load_scenario(line_doc())
    assert sc.world.width == 10 and sc.world.height == 1
    assert sc.model.offsets == ((0, 0),)
    assert len(sc.uncertainty_sets) == 2
    assert sc.uncertainty_sets[0][1] == (Hypothesis(5, 0), Hypothesis(7, 0))


def test_load_scenario_out_of_bounds_pose():
    doc = line_doc()
    doc["uncertainty_sets"][0][0]["x"] = 10
    with pytest.raises(ScenarioError, match="out of bounds"):
        load_scenario(doc)


def test_load_scenario_missing_key_names_path():
    doc = line_doc()
    del doc["grid"]["width"]
    with pytest.raises(ScenarioError, match=r"\$\.grid\.width"):
        load_scenario(doc)


def test_load_scenario_empty_object():
    doc = line_doc()
    doc["object"]["offsets"] = []
    with pytest.raises(ScenarioError, match="empty"):
        load_scenario(doc)


def test_load_scenario_bad_rotation():
    doc = line_doc()
    doc["uncertainty_sets"][0][0]["rot"] = 45
    with pytest.raises(ScenarioError, match="rot"):
        load_scenario(doc)


def test_load_scenario_pose_on_robot_start():
    doc = line_doc()
    doc["uncertainty_sets"][0][0] = {"x": 0, "y": 0}
    with pytest.raises(ScenarioError, match="robot start"):
        load_scenario(doc)


def test_scenario_doc_roundtrip():
    sc = load_scenario(line_doc())
    assert load_scenario(scenario_to_doc(sc)).uncertainty_sets == sc.uncertainty_sets
