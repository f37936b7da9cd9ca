"""Brute-force ground truth: breadth-first search over exact states and
closure of rotation-induced groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .graph import DiGraph, simple_cycles
from .mapf import Instance, MapfState, Move, Plan, Rotation
from .perm import Permutation

DEFAULT_STATE_CAP = 5_000_000


class Overflow(RuntimeError):
    pass


@dataclass(frozen=True)
class Reachable:
    plan: Plan
    visited: int

    status = "reachable"


@dataclass(frozen=True)
class Unreachable:
    visited: int

    status = "unreachable"


@dataclass(frozen=True)
class OverflowResult:
    visited: int

    status = "overflow"


class StateSpace:
    """Successor function over states encoded as tuples of node indices.

    ``code[i]`` is the node index of ``inst.agents[i]``.
    """

    def __init__(self, inst: Instance):
        g = inst.digraph
        self.g = g
        self.agents = inst.agents
        self.nodes = g.nodes
        self.idx = {v: i for i, v in enumerate(g.nodes)}
        self.succ = [tuple(self.idx[w] for w in g.succ(v)) for v in g.nodes]
        self.moves = inst.allows_moves
        self.cycles: list[tuple[int, ...]] = []
        if inst.allows_rotations:
            min_len = 2 if inst.rot2 == "allow" else 3
            for c in simple_cycles(g, min_len=min_len):
                self.cycles.append(tuple(self.idx[v] for v in c))

    def encode(self, s: MapfState) -> tuple[int, ...]:
        return tuple(self.idx[s[a]] for a in self.agents)

    def decode(self, code: tuple[int, ...]) -> MapfState:
        return MapfState({a: self.nodes[i] for a, i in zip(self.agents, code)})

    def successors(self, code: tuple[int, ...]) -> Iterator[tuple[tuple, tuple[int, ...]]]:
        at = {p: i for i, p in enumerate(code)}
        if self.moves:
            for a, p in enumerate(code):
                for q in self.succ[p]:
                    if q not in at:
                        nxt = list(code)
                        nxt[a] = q
                        yield ("m", a, p, q), tuple(nxt)
        for ci, cyc in enumerate(self.cycles):
            if all(v in at for v in cyc):
                nxt = list(code)
                k = len(cyc)
                for j, v in enumerate(cyc):
                    nxt[at[v]] = cyc[(j + 1) % k]
                yield ("r", ci), tuple(nxt)

    def codes(self) -> Iterator[tuple[int, ...]]:
        """Every injective placement of the agents."""
        return itertools.permutations(range(len(self.nodes)), len(self.agents))

    def step(self, code: tuple[int, ...], label: tuple):
        if label[0] == "m":
            _, a, p, q = label
            return Move(self.agents[a], self.nodes[p], self.nodes[q])
        cyc = [self.nodes[i] for i in self.cycles[label[1]]]
        return Rotation.on_cycle(self.decode(code), cyc)


def bfs_reachability(inst: Instance, state_cap: int = DEFAULT_STATE_CAP):
    """Shortest plan from init to goal, or Unreachable, or OverflowResult."""
    space = StateSpace(inst)
    start, goal = space.encode(inst.init), space.encode(inst.goal)
    parent: dict[tuple[int, ...], tuple | None] = {start: None}
    if start == goal:
        return Reachable(Plan(), 1)
    frontier = [start]
    while frontier:
        nxt = []
        for code in frontier:
            for label, new in space.successors(code):
                if new in parent:
                    continue
                parent[new] = (code, label)
                if new == goal:
                    return Reachable(_rebuild(space, parent, new), len(parent))
                if len(parent) > state_cap:
                    return OverflowResult(len(parent))
                nxt.append(new)
        frontier = nxt
    return Unreachable(len(parent))


def _rebuild(space: StateSpace, parent: dict, code: tuple[int, ...]) -> Plan:
    steps = []
    while parent[code] is not None:
        prev, label = parent[code]
        steps.append(space.step(prev, label))
        code = prev
    return Plan(tuple(reversed(steps)))


def reachable_states(inst: Instance, state_cap: int = DEFAULT_STATE_CAP) -> set[MapfState]:
    """Every state reachable from ``inst.init``; raises Overflow past the cap."""
    space = StateSpace(inst)
    start = space.encode(inst.init)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for code in frontier:
            for _, new in space.successors(code):
                if new not in seen:
                    seen.add(new)
                    if len(seen) > state_cap:
                        raise Overflow(f"more than {state_cap} states")
                    nxt.append(new)
        frontier = nxt
    return {space.decode(c) for c in seen}


def enumerate_group(g: DiGraph, rot2: str = "allow", cap: int = 1_000_000,
                    points=None) -> set[Permutation]:
    """Closure of the admitted cycle rotations of ``g`` (fully occupied)."""
    pts = tuple(points) if points is not None else g.nodes
    min_len = 2 if rot2 == "allow" else 3
    gens = [Permutation.cycle(pts, c) for c in simple_cycles(g, min_len=min_len)
            if set(c) <= set(pts)]
    ident = tuple(range(len(pts)))
    raw = [p.images for p in gens]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for q in raw:
                r = tuple([q[i] for i in p])
                if r not in seen:
                    seen.add(r)
                    if len(seen) > cap:
                        raise Overflow(f"group larger than {cap}")
                    nxt.append(r)
        frontier = nxt
    return {Permutation(pts, p) for p in seen}
