import random

from dimapf.graph import DiGraph, simple_cycles
from dimapf.mapf import Instance, MapfState, Move, Rotation, apply_step, validate_plan
from dimapf.oracle import (OverflowResult, Reachable, Unreachable, bfs_reachability, enumerate_group,
                           reachable_states)
from cases import random_sc_graph, random_state
from fixtures import FIG1_LEFT, FIG1_RIGHT, cycle_graph, full_cycle_instance


def test_fig1():
    left = bfs_reachability(FIG1_LEFT)
    assert isinstance(left, Reachable) and len(left.plan) == 3
    assert validate_plan(FIG1_LEFT, left.plan).ok
    assert isinstance(bfs_reachability(FIG1_RIGHT), Unreachable)


def test_overflow_with_tiny_cap():
    res = bfs_reachability(full_cycle_instance(10, 5), 3)
    assert isinstance(res, OverflowResult) and res.status == "overflow"


def test_group_examples():
    assert len(enumerate_group(cycle_graph(6))) == 6
    two = DiGraph(["u", "v"], [("u", "v"), ("v", "u")])
    assert len(enumerate_group(two, "allow")) == 2
    assert len(enumerate_group(two, "forbid")) == 1


def _legal(inst, s):
    out = []
    if inst.allows_moves:
        out += [Move(a, s[a], w) for a in inst.agents for w in inst.digraph.succ(s[a]) if s.occupant(w) is None]
    if inst.allows_rotations:
        for c in simple_cycles(inst.digraph, min_len=2 if inst.rot2 == "allow" else 3):
            if all(s.occupant(v) for v in c):
                out.append(Rotation.on_cycle(s, c))
    return out


def _depth_limited(inst, s, depth):
    if s == inst.goal:
        return True
    if depth == 0:
        return False
    return any(_depth_limited(inst, apply_step(inst.digraph, s, st, inst.rot2), depth - 1) for st in _legal(inst, s))


def test_bfs_is_optimal_against_iterative_deepening():
    rng = random.Random(31)
    for _ in range(40):
        g = random_sc_graph(rng, rng.randint(2, 4), 0.5)
        m = rng.randint(1, len(g))
        init = random_state(rng, g, m)
        goal = MapfState(dict(zip(init, rng.sample(list(g.nodes), m))))
        inst = Instance(g, tuple(init), init, goal, rng.choice(("simple", "rotation", "both")))
        res = bfs_reachability(inst)
        if isinstance(res, Reachable):
            assert validate_plan(inst, res.plan).ok
            k = len(res.plan)
            assert _depth_limited(inst, init, k)
            assert k == 0 or not _depth_limited(inst, init, k - 1)
        else:
            assert goal not in reachable_states(inst)


def test_reachable_states_closed_under_steps():
    g = cycle_graph(4)
    start = MapfState({"a": "c0", "b": "c1", "c": "c2"})
    inst = Instance(g, ("a", "b", "c"), start, start, "simple")
    states = reachable_states(inst)
    assert len(states) == 12  # agents keep their cyclic order
    for s in states:
        for st in _legal(inst, s):
            assert apply_step(g, s, st) in states
