from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graph_and_start, tadpoles
from tadpole_explore.explorers import RandomPolicy, run_policy
from tadpole_explore.fog_env import (
    GraphWorld,
    IllegalMove,
    Observation,
    Session,
    UnknownStartVertex,
    is_complete,
    known_shortest_path,
    move_to,
    new_session,
    trace_to_csv,
)


def keys(obs):
    return {e.key for e in obs.known_edges}


def test_new_session_at_junction(unit_t31):
    s = new_session(unit_t31, 0)
    assert keys(s.observation) == {(0, 1), (0, 2), (0, 3)}
    assert s.observation.cost_so_far == 0


def test_new_session_at_stem_end(unit_t31):
    s = new_session(unit_t31, 3)
    assert keys(s.observation) == {(0, 3)}
    assert s.observation.frontier == {0}


def test_unknown_start(unit_t31):
    with pytest.raises(UnknownStartVertex):
        new_session(unit_t31, 9)


def test_move_reveals(unit_t31):
    s = new_session(unit_t31, 0)
    obs = move_to(s, 1)
    assert obs.cost_so_far == 1
    assert obs.is_visited(1)
    assert (1, 2) in keys(obs)


def test_repeat_traversal_is_paid(unit_t31):
    s = new_session(unit_t31, 0)
    s.walk([0, 1, 0, 1])
    assert s.observation.cost_so_far == 3


def test_illegal_moves(unit_t31):
    s = new_session(unit_t31, 3)
    # (0, 1) exists in the hidden graph but is not known yet
    with pytest.raises(IllegalMove):
        move_to(s, 1)
    s.move_to(0)
    with pytest.raises(IllegalMove):
        move_to(s, 0)


def test_completion(unit_t31):
    s = new_session(unit_t31, 0)
    assert not is_complete(s)
    s.walk([0, 1, 2, 0, 3])
    assert not is_complete(s)  # everything seen, not home yet
    s.move_to(0)
    assert is_complete(s)
    tour = s.tour()
    tour.validate(unit_t31)
    assert tour.total_cost == 5


def test_shortest_path_direct(unit_t31):
    s = new_session(unit_t31, 0)
    assert known_shortest_path(s.observation, 2) == ([0, 2], 1)


def test_shortest_path_avoids_frontier_interior(unit_t31):
    s = new_session(unit_t31, 0)
    s.walk([0, 1, 2])
    assert known_shortest_path(s.observation, 3) == ([2, 0, 3], 2)


def _all_legal_paths(obs, target):
    """Every simple known path from current to target whose interior is visited."""
    out = []

    def extend(path):
        x = path[-1]
        if x == target:
            out.append(list(path))
            return
        if x != path[0] and not obs.is_visited(x):
            return
        for y in obs.neighbors(x):
            if y not in path:
                extend(path + [y])

    extend([obs.current])
    return out


def _cost(obs, path):
    return sum((obs.weight(a, b) for a, b in zip(path, path[1:])), Fraction(0))


def test_shortest_path_tie_goes_to_smaller_sequence():
    from tadpole_explore.graph_core import make_cycle

    g = make_cycle(4, [1, 1, 1, 1])
    s = new_session(g, 0)
    s.walk([0, 1, 2, 1, 0, 3])
    # 3 -> 1 costs 2 both ways round: [3, 0, 1] and [3, 2, 1]
    assert known_shortest_path(s.observation, 1) == ([3, 0, 1], 2)


@given(graph_and_start(tadpoles()), st.integers(0, 2**32), st.integers(0, 30))
def test_shortest_path_matches_brute_force(gs, seed, steps):
    g, start = gs
    s = new_session(g, start)
    policy = RandomPolicy(seed)
    for _ in range(steps):
        if not s.observation.frontier:
            break
        s.walk(known_shortest_path(s.observation, policy.choose(s.observation))[0])
    obs = s.observation
    for target in sorted(obs.known_vertices):
        legal = _all_legal_paths(obs, target)
        best = min(_cost(obs, p) for p in legal)
        path, cost = known_shortest_path(obs, target)
        assert cost == best
        assert path == min(p for p in legal if _cost(obs, p) == best)


@given(graph_and_start(tadpoles()), st.integers(0, 2**32))
def test_information_and_cost_invariants(gs, seed):
    g, start = gs
    s = new_session(g, start)
    policy = RandomPolicy(seed)
    obs = s.observation
    prev_vertices, prev_edges, prev_visited = set(), set(), set()
    while not s.is_complete():
        target = policy.choose(obs) if obs.frontier else obs.start
        for v in known_shortest_path(obs, target)[0][1:]:
            s.move_to(v)
            # monotone knowledge
            assert prev_vertices <= obs.known_vertices
            assert prev_edges <= obs.known_edges
            assert prev_visited <= obs.visited
            prev_vertices, prev_edges, prev_visited = obs.known_vertices, obs.known_edges, obs.visited
            # a visited vertex shows all of its hidden edges
            assert obs.neighbors(v) == g.neighbors(v)
            assert obs.is_visited(obs.current)
    assert obs.cost_so_far == sum((ev.weight for ev in s.trace), Fraction(0))
    assert obs.cost_so_far == sum((g.weight(ev.src, ev.dst) for ev in s.trace), Fraction(0))
    s.tour().validate(g)


def test_observation_has_no_world_reference(unit_t31):
    s = new_session(unit_t31, 0)
    run_policy(s, RandomPolicy(3))
    assert not any(isinstance(v, (GraphWorld, type(unit_t31))) for v in vars(s.observation).values())
    assert isinstance(s.observation, Observation)


def test_trace_csv(unit_t31):
    s = Session(GraphWorld(unit_t31), 3)
    s.walk([3, 0, 1])
    assert trace_to_csv(s.trace).splitlines() == [
        "step,from,to,weight,cumulative_cost",
        "1,3,0,1/1,1/1",
        "2,0,1,1/1,2/1",
    ]
