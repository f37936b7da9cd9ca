"""Random cases and independent expectations shared by several test files."""

from __future__ import annotations

import random

from dimapf.graph import DiGraph, is_strongly_connected
from dimapf.mapf import MapfState, Move, apply_step
from fixtures import cycle_graph


def random_sc_graph(rng: random.Random, n: int, density: float = 0.3) -> DiGraph:
    names = [f"v{i}" for i in range(n)]
    while True:
        g = DiGraph(names, [(u, v) for u in names for v in names if u != v and rng.random() < density])
        if is_strongly_connected(g):
            return g


def random_state(rng: random.Random, g: DiGraph, m: int) -> MapfState:
    return MapfState({f"r{i}": v for i, v in enumerate(rng.sample(list(g.nodes), m))})


def undo_cases(rng: random.Random, count: int):
    """(cycle, cycle digraph, start, state after a random forward walk)."""
    for _ in range(count):
        k = rng.randint(2, 9)
        cyc = [f"u{i}" for i in range(k)]
        g = DiGraph(cyc, [(cyc[i], cyc[(i + 1) % k]) for i in range(k)])
        start = random_state(rng, g, rng.randint(1, k - 1))
        s = start
        for _ in range(rng.randint(0, 40)):
            moves = [Move(a, s[a], g.succ(s[a])[0]) for a in s if s.occupant(g.succ(s[a])[0]) is None]
            s = apply_step(g, s, rng.choice(moves))
        yield cyc, g, start, s


def inverse_move_cases(rng: random.Random, count: int):
    """(graph, state, legal move) triples on random strongly connected digraphs."""
    made = 0
    while made < count:
        n = rng.randint(2, 9)
        g = random_sc_graph(rng, n, rng.choice((0.2, 0.3, 0.5)))
        s = random_state(rng, g, rng.randint(1, n - 1))
        moves = [Move(a, s[a], w) for a in s for w in g.succ(s[a]) if s.occupant(w) is None]
        if moves:
            made += 1
            yield g, s, rng.choice(moves)


def valid_type(r: int, s: int, t: int) -> bool:
    """Side conditions on a normalised cycle-pair type."""
    if s < 1 or r > t or r + s < 2 or t + s < 2:
        return False
    return r > 0 or (s >= 3 and t >= 1)


def expected_three_cycle(r: int, s: int, t: int) -> tuple[str, ...] | None:
    """The 3-cycle each case of the case analysis names, or None for T0 types."""
    a = lambda i: f"a{i}"  # noqa: E731
    b = lambda i: f"b{i}"  # noqa: E731
    c = lambda i: f"c{i}"  # noqa: E731
    if r == 0:
        return (b(s), c(t), b(1))
    if s == 1:
        return (b(1), a(1), c(t))
    if r == 1 and s == 2:
        return (a(1), b(2), b(1))
    if r == 1 and t == 1:
        return (b(s), a(1), c(1))
    if (r, s, t) in ((1, 3, 2), (2, 2, 2)):
        return None
    if r == 1 and s == 3:
        return (b(1), c(t - 2), a(1))
    if r == 1:
        return (b(s - 1), b(2), a(r))
    if r == 2 and s >= 3 and t == 2:
        return (b(s - 1), b(1), c(t))
    return (b(s - 1), c(t - 2), c(t))


def same_cycle(x, y) -> bool:
    if len(x) != len(y):
        return False
    i = list(y).index(x[0]) if x[0] in y else None
    return i is not None and tuple(y[i:]) + tuple(y[:i]) == tuple(x)


def pbc(n: int, backward) -> DiGraph:
    """Directed n-cycle plus the reverse of arc i for each i in ``backward``."""
    g = cycle_graph(n)
    return DiGraph(g.nodes, set(g.arcs) | {(g.nodes[(i + 1) % n], g.nodes[i]) for i in backward})


def seven_node_pair_graphs():
    """Cycle-pair graphs on 7 nodes: two cycles sharing a path."""
    out = []
    for r in range(0, 5):
        for s in range(1, 8):
            t = 7 - r - s
            if t < r or t < 0 or (r == 0 and (s < 3 or t < 1)):
                continue
            a = [f"a{i}" for i in range(1, r + 1)]
            b = [f"b{i}" for i in range(1, s + 1)]
            c = [f"c{i}" for i in range(1, t + 1)]
            arcs = set()
            for cyc in (a + b[::-1], c + b[::-1]):
                arcs |= {(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))}
            out.append(((r, s, t), DiGraph(a + b + c, arcs)))
    return out
