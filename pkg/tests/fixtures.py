"""Shared instances."""

from dimapf.graph import DiGraph
from dimapf.mapf import Instance, MapfState

# Four grid cells: v1 v2 v3 in a row and v4 below v2, all adjacencies bidirectional.
GRID = DiGraph(["v1", "v2", "v3", "v4"],
               [("v1", "v2"), ("v2", "v1"), ("v2", "v3"), ("v3", "v2"), ("v2", "v4"), ("v4", "v2")])

FIG1_LEFT = Instance(GRID, ("S", "C"), MapfState({"S": "v1", "C": "v4"}),
                     MapfState({"S": "v3", "C": "v2"}), regime="simple")
FIG1_RIGHT = Instance(GRID, ("S", "C", "T"), MapfState({"S": "v1", "C": "v4", "T": "v3"}),
                      MapfState({"S": "v3", "C": "v2", "T": "v1"}), regime="simple")


def cycle_graph(n: int, prefix: str = "c") -> DiGraph:
    names = [f"{prefix}{i}" for i in range(n)]
    return DiGraph(names, [(names[i], names[(i + 1) % n]) for i in range(n)])


def full_cycle_instance(n: int, goal_shift: int, rot2: str = "forbid") -> Instance:
    g = cycle_graph(n)
    agents = tuple(f"r{i}" for i in range(n))
    init = MapfState({a: g.nodes[i] for i, a in enumerate(agents)})
    goal = MapfState({a: g.nodes[(i + goal_shift) % n] for i, a in enumerate(agents)})
    return Instance(g, agents, init, goal, regime="rotation", rot2=rot2)
