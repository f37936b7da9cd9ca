"""Directed-graph substrate: connectivity, cycles, cycle pairs, isomorphism.

Everything here is deterministic: node order is insertion order, and every
enumeration is sorted so that repeated runs produce identical output.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

Cycle = tuple[str, ...]


def _check_label(label: str) -> str:
    if not isinstance(label, str) or not label or any(ch.isspace() for ch in label):
        raise ValueError(f"invalid node label {label!r}")
    return label


class DiGraph:
    """Simple directed graph with ordered nodes.

    Instances are treated as immutable values; they hash and compare by
    node order and arc set.
    """

    __slots__ = ("nodes", "arcs", "_succ", "_pred", "_index", "_hash")

    def __init__(self, nodes: Iterable[str] = (), arcs: Iterable[tuple[str, str]] = ()):
        order: dict[str, None] = {}
        for v in nodes:
            order[_check_label(v)] = None
        arc_list = []
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop ({u},{v}) not allowed")
            for w in (u, v):
                if w not in order:
                    order[_check_label(w)] = None
            arc_list.append((u, v))
        self.nodes: tuple[str, ...] = tuple(order)
        self.arcs: frozenset[tuple[str, str]] = frozenset(arc_list)
        self._index = {v: i for i, v in enumerate(self.nodes)}
        succ: dict[str, list[str]] = {v: [] for v in self.nodes}
        pred: dict[str, list[str]] = {v: [] for v in self.nodes}
        for u, v in self.arcs:
            succ[u].append(v)
            pred[v].append(u)
        key = self._index.__getitem__
        self._succ = {v: tuple(sorted(ws, key=key)) for v, ws in succ.items()}
        self._pred = {v: tuple(sorted(ws, key=key)) for v, ws in pred.items()}
        self._hash = hash((self.nodes, self.arcs))

    @classmethod
    def from_adjacency(cls, adj: Mapping[str, Sequence[str]]) -> "DiGraph":
        nodes = list(adj)
        for targets in adj.values():
            nodes.extend(targets)
        return cls(nodes, [(u, v) for u, vs in adj.items() for v in vs])

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: object) -> bool:
        return v in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiGraph):
            return NotImplemented
        return self.nodes == other.nodes and self.arcs == other.arcs

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        arcs = " ".join(f"{u}->{v}" for u, v in self.sorted_arcs())
        return f"DiGraph(nodes={list(self.nodes)}, arcs=[{arcs}])"

    def index(self, v: str) -> int:
        return self._index[v]

    def succ(self, v: str) -> tuple[str, ...]:
        return self._succ[v]

    def pred(self, v: str) -> tuple[str, ...]:
        return self._pred[v]

    def has_arc(self, u: str, v: str) -> bool:
        return (u, v) in self.arcs

    def sorted_arcs(self) -> list[tuple[str, str]]:
        return sorted(self.arcs, key=lambda a: (self._index[a[0]], self._index[a[1]]))

    def subgraph(self, nodes: Iterable[str]) -> "DiGraph":
        keep = set(nodes)
        kept = [v for v in self.nodes if v in keep]
        return DiGraph(kept, [(u, v) for u, v in self.sorted_arcs() if u in keep and v in keep])

    def with_path(self, path: Sequence[str]) -> "DiGraph":
        extra = list(zip(path, path[1:]))
        return DiGraph(list(self.nodes) + list(path), self.sorted_arcs() + extra)

    def relabel(self, mapping: Mapping[str, str]) -> "DiGraph":
        return DiGraph([mapping[v] for v in self.nodes],
                       [(mapping[u], mapping[v]) for u, v in self.sorted_arcs()])


# ---------------------------------------------------------------- connectivity

def strongly_connected_components(g: DiGraph) -> list[DiGraph]:
    """Tarjan's algorithm (iterative). Components are induced sub-digraphs,
    ordered by the position of their earliest node."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[list[str]] = []
    counter = itertools.count()

    for root in g.nodes:
        if root in index:
            continue
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(g.succ(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)

    comps = [sorted(c, key=g.index) for c in comps]
    comps.sort(key=lambda c: g.index(c[0]))
    return [g.subgraph(c) for c in comps]


@functools.lru_cache(maxsize=4096)
def is_strongly_connected(g: DiGraph) -> bool:
    if len(g) == 0:
        return True
    return len(strongly_connected_components(g)) == 1


def shortest_path(g: DiGraph, source: str, targets: Iterable[str],
                  allowed: set[str] | None = None) -> list[str] | None:
    """BFS path from ``source`` to the nearest node of ``targets`` along arcs.

    Ties are broken by node order. ``allowed`` restricts intermediate nodes.
    """
    goal = set(targets)
    if source in goal:
        return [source]
    parent = {source: None}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.succ(u):
                if w in parent:
                    continue
                parent[w] = u
                if w in goal:
                    path = [w]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if allowed is None or w in allowed:
                    nxt.append(w)
        frontier = nxt
    return None


@dataclass(frozen=True)
class UndirectedGraph:
    nodes: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def neighbors(self, v: str) -> list[str]:
        return [w for e in self.edges if v in e for w in e if w != v]


def underlying_graph(g: DiGraph) -> UndirectedGraph:
    return UndirectedGraph(g.nodes, frozenset(frozenset(a) for a in g.arcs))


def undirected_neighbors(g: DiGraph, v: str) -> tuple[str, ...]:
    return tuple(sorted(set(g.succ(v)) | set(g.pred(v)), key=g.index))


# ---------------------------------------------------------------- cycles

def canonical_cycle(cycle: Sequence[str]) -> Cycle:
    """Rotate a cycle so its lexicographically smallest label comes first."""
    i = min(range(len(cycle)), key=lambda k: cycle[k])
    return tuple(cycle[i:]) + tuple(cycle[:i])


def _johnson(g: DiGraph) -> Iterator[list[str]]:
    # Johnson (1975), restricted to nodes after the current start node.
    order = g.nodes
    for s_idx, start in enumerate(order):
        allowed = set(order[s_idx:])
        sub = g.subgraph(allowed)
        comp = next((c for c in strongly_connected_components(sub) if start in c), None)
        if comp is None or (len(comp) == 1):
            continue
        nodes = set(comp.nodes)
        blocked: set[str] = set()
        bmap: dict[str, set[str]] = {v: set() for v in nodes}
        path = [start]
        blocked.add(start)
        stack = [(start, iter([w for w in g.succ(start) if w in nodes]))]
        closed = [False]
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is not None:
                if w == start:
                    yield list(path)
                    closed[-1] = True
                elif w not in blocked:
                    path.append(w)
                    blocked.add(w)
                    closed.append(False)
                    stack.append((w, iter([x for x in g.succ(w) if x in nodes])))
                continue
            stack.pop()
            was_closed = closed.pop()
            if was_closed:
                pending = [v]
                while pending:
                    x = pending.pop()
                    if x in blocked:
                        blocked.discard(x)
                        pending.extend(bmap[x])
                        bmap[x].clear()
            else:
                for x in g.succ(v):
                    if x in nodes:
                        bmap[x].add(v)
            path.pop()
            if closed:
                closed[-1] = closed[-1] or was_closed


def _bounded_cycles(g: DiGraph, max_len: int) -> Iterator[list[str]]:
    order = g.nodes
    for s_idx, start in enumerate(order):
        allowed = set(order[s_idx:])
        path = [start]
        on_path = {start}

        def extend(v: str) -> Iterator[list[str]]:
            for w in g.succ(v):
                if w == start:
                    yield list(path)
                elif w in allowed and w not in on_path and len(path) < max_len:
                    path.append(w)
                    on_path.add(w)
                    yield from extend(w)
                    path.pop()
                    on_path.discard(w)

        yield from extend(start)


def simple_cycles(g: DiGraph, min_len: int = 2, max_len: int | None = None) -> list[Cycle]:
    """All simple directed cycles with ``min_len <= length <= max_len``.

    Each cycle is canonicalised (smallest label first); output is sorted by
    length, then lexicographically.
    """
    if min_len < 2:
        raise ValueError("min_len must be at least 2")
    return list(_cycles_cached(g, min_len, max_len))


@functools.lru_cache(maxsize=4096)
def _cycles_cached(g: DiGraph, min_len: int, max_len: int | None) -> tuple[Cycle, ...]:
    raw = _johnson(g) if max_len is None else _bounded_cycles(g, max_len)
    found = set()
    for c in raw:
        if len(c) >= min_len and (max_len is None or len(c) <= max_len):
            found.add(canonical_cycle(c))
    return tuple(sorted(found, key=lambda c: (len(c), c)))


# ---------------------------------------------------------------- cycle shapes

@dataclass(frozen=True)
class PBCInfo:
    """Result of the partially-bidirectional-cycle test."""

    is_pbc: bool
    order: tuple[str, ...] = ()
    backward: frozenset[tuple[str, str]] = frozenset()

    def __bool__(self) -> bool:
        return self.is_pbc


def is_partially_bidirectional_cycle(g: DiGraph) -> PBCInfo:
    """Is ``g`` a directed Hamiltonian cycle plus some reversed cycle arcs?"""
    if not is_strongly_connected(g):
        raise ValueError("digraph is not strongly connected")
    n = len(g)
    if n == 1:
        return PBCInfo(True, g.nodes)
    if n == 2:
        return PBCInfo(True, g.nodes)
    nbrs = {v: undirected_neighbors(g, v) for v in g.nodes}
    if any(len(ws) != 2 for ws in nbrs.values()):
        return PBCInfo(False)
    start = min(g.nodes)
    for first in nbrs[start]:
        order = [start, first]
        while len(order) < n:
            a, b = nbrs[order[-1]]
            nxt = b if a == order[-2] else a
            if nxt in order:
                break
            order.append(nxt)
        if len(order) < n:
            return PBCInfo(False)
        forward = {(order[i], order[(i + 1) % n]) for i in range(n)}
        if forward <= g.arcs:
            return PBCInfo(True, tuple(order), frozenset(g.arcs - forward))
    return PBCInfo(False)


@dataclass(frozen=True)
class CyclePair:
    """Two directed cycles sharing the path b_s -> ... -> b_1.

    The left cycle runs b_1 -> a_1 -> ... -> a_r -> b_s -> ... -> b_1 and the
    right cycle b_1 -> c_1 -> ... -> c_t -> b_s -> ... -> b_1.
    """

    a_path: tuple[str, ...]
    b_path: tuple[str, ...]
    c_path: tuple[str, ...]

    @property
    def type(self) -> tuple[int, int, int]:
        return (len(self.a_path), len(self.b_path), len(self.c_path))

    @property
    def left_cycle(self) -> Cycle:
        return self.a_path + self.b_path[::-1]

    @property
    def right_cycle(self) -> Cycle:
        return self.c_path + self.b_path[::-1]

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.a_path + self.b_path + self.c_path

    def check(self, g: DiGraph) -> None:
        """Raise ValueError unless both cycles exist in ``g`` and the pair is
        of a shape admitted by the cycle-pair normal form."""
        r, s, t = self.type
        if len(set(self.nodes)) != r + s + t:
            raise ValueError("cycle-pair paths overlap")
        if s < 1 or r + s < 2 or t + s < 2:
            raise ValueError(f"degenerate cycle pair {self.type}")
        if r > t:
            raise ValueError("cycle pair not normalised (r > t)")
        if r == 0 and s < 3:
            raise ValueError("all-shared cycle needs at least three nodes")
        for cyc in (self.left_cycle, self.right_cycle):
            for i, u in enumerate(cyc):
                if not g.has_arc(u, cyc[(i + 1) % len(cyc)]):
                    raise ValueError(f"arc {u}->{cyc[(i + 1) % len(cyc)]} missing")


def _contiguous_run(cycle: Cycle, shared: set[str]) -> tuple[str, ...] | None:
    n = len(cycle)
    if len(shared) == n:
        return None
    for i in range(n):
        if cycle[i] in shared and cycle[i - 1] not in shared:
            run = []
            j = i
            while cycle[j % n] in shared:
                run.append(cycle[j % n])
                j += 1
            return tuple(run) if len(run) == len(shared) else ()
    return ()


def _rotate_to(cycle: Cycle, v: str) -> Cycle:
    i = cycle.index(v)
    return cycle[i:] + cycle[:i]


def make_cycle_pair(c1: Cycle, c2: Cycle) -> CyclePair | None:
    """Build the normalised pair for two cycles, or None when their overlap is
    not a single common path traversed in the same direction."""
    shared = set(c1) & set(c2)
    if not shared or set(c1) == set(c2):
        return None
    run1 = _contiguous_run(c1, shared)
    run2 = _contiguous_run(c2, shared)
    if run1 == () or run2 == ():
        return None
    run = run1 if run1 is not None else run2
    for cyc, own in ((c1, run1), (c2, run2)):
        if own is None:
            # whole cycle is shared: it must close the path directly
            if _rotate_to(cyc, run[0]) != run:
                return None
        elif own != run:
            return None
    b_path = run[::-1]
    s = len(run)

    def exclusive(cyc: Cycle) -> tuple[str, ...]:
        rot = _rotate_to(cyc, run[0])
        return rot[s:] if rot[:s] == run else ()

    a, c = exclusive(c1), exclusive(c2)
    if (len(a), a) > (len(c), c):
        a, c = c, a
    pair = CyclePair(a, b_path, c)
    r, _, t = pair.type
    if r == 0 and (s < 3 or t < 1):
        return None
    return pair


def cycle_pairs(g: DiGraph, cycles: Sequence[Cycle] | None = None) -> list[CyclePair]:
    """All valid cycle pairs, ordered by (r+s+t, type, node labels)."""
    if cycles is None:
        cycles = simple_cycles(g)
    pairs = set()
    for c1, c2 in itertools.combinations(cycles, 2):
        p = make_cycle_pair(c1, c2)
        if p is not None:
            pairs.add(p)
    return sorted(pairs, key=lambda p: (sum(p.type), p.type, p.nodes))


def find_cycle_pair(g: DiGraph, cycles: Sequence[Cycle] | None = None,
                    max_len: int | None = 8) -> CyclePair | None:
    """Smallest cycle pair of ``g``; None for trivial, non-strongly-connected
    or partially bidirectional cycle inputs."""
    if len(g) < 2 or not is_strongly_connected(g) or is_partially_bidirectional_cycle(g):
        return None
    if cycles is None:
        pairs = cycle_pairs(g, simple_cycles(g, max_len=max_len)) if max_len else []
        if not pairs:
            pairs = cycle_pairs(g, simple_cycles(g))
    else:
        pairs = cycle_pairs(g, cycles)
    return pairs[0] if pairs else None


def classify_pair(p: CyclePair) -> tuple[int, int, int]:
    r, s, t = p.type
    return (r, s, t) if r <= t else (t, s, r)


def shared_count_type(c1: Sequence[str], c2: Sequence[str]) -> tuple[int, int, int] | None:
    """Type of two cycles by counting shared nodes only (no path check).

    Cycles are node sequences without the repeated start node.
    """
    if len(c1) > len(c2):
        c1, c2 = c2, c1
    sh = len(set(c1) & set(c2))
    if tuple(c1) == tuple(c2) or sh == 0:
        return None
    return (len(c1) - sh, sh, len(c2) - sh)


# ---------------------------------------------------------------- isomorphism

def _degree_key(g: DiGraph, v: str) -> tuple[int, int, int]:
    both = sum(1 for w in g.succ(v) if g.has_arc(w, v))
    return (len(g.succ(v)), len(g.pred(v)), both)


def find_embedding(pattern: DiGraph, host: DiGraph, induced: bool = False) -> dict[str, str] | None:
    """Injective node map sending every arc of ``pattern`` to an arc of
    ``host`` (and non-arcs to non-arcs when ``induced``)."""
    if len(pattern) > len(host):
        return None
    order = sorted(pattern.nodes, key=lambda v: -(len(pattern.succ(v)) + len(pattern.pred(v))))
    # prefer nodes adjacent to already placed ones
    placed: list[str] = []
    rest = list(order)
    while rest:
        nxt = next((v for v in rest if any(
            w in placed for w in pattern.succ(v) + pattern.pred(v))), rest[0])
        placed.append(nxt)
        rest.remove(nxt)
    pk = {v: _degree_key(pattern, v) for v in pattern.nodes}
    hk = {v: _degree_key(host, v) for v in host.nodes}
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def fits(v: str, x: str) -> bool:
        a, b, c = pk[v]
        ha, hb, hc = hk[x]
        if induced:
            if (a, b, c) != (ha, hb, hc):
                return False
        elif a > ha or b > hb or c > hc:
            return False
        for w, y in mapping.items():
            if pattern.has_arc(v, w) and not host.has_arc(x, y):
                return False
            if pattern.has_arc(w, v) and not host.has_arc(y, x):
                return False
            if induced and (host.has_arc(x, y) != pattern.has_arc(v, w)
                            or host.has_arc(y, x) != pattern.has_arc(w, v)):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(placed):
            return True
        v = placed[i]
        for x in host.nodes:
            if x in used or not fits(v, x):
                continue
            mapping[v] = x
            used.add(x)
            if search(i + 1):
                return True
            del mapping[v]
            used.discard(x)
        return False

    return dict(mapping) if search(0) else None


def are_isomorphic(g1: DiGraph, g2: DiGraph) -> bool:
    if len(g1) != len(g2) or len(g1.arcs) != len(g2.arcs):
        return False
    if sorted(_degree_key(g1, v) for v in g1.nodes) != sorted(_degree_key(g2, v) for v in g2.nodes):
        return False
    return find_embedding(g1, g2, induced=True) is not None
