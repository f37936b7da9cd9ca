"""Executable versions of the constructive arguments: undo plans on cycles,
inverse moves, lifting of undirected plans, explicit 3-cycle words, the T0
extension enumeration, pair transport, blank normalisation and rotation
emulation by simple moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import (CyclePair, DiGraph, canonical_cycle, are_isomorphic, shared_count_type,
                    shortest_path, simple_cycles)
from .mapf import MapfState, Move, Plan, Rotation, apply_step
from .perm import GenWord, Permutation


class NotReachable(ValueError):
    pass


class InvalidType(ValueError):
    pass


class Stuck(RuntimeError):
    pass


class FullyOccupied(ValueError):
    pass


def _run(g: DiGraph, s: MapfState, steps: Sequence) -> MapfState:
    for step in steps:
        s = apply_step(g, s, step)
    return s


# ---------------------------------------------------------------- undo on a cycle

def undo_on_cycle(cycle: Sequence[str], from_state: MapfState, to_state: MapfState) -> Plan:
    """Simple moves along ``cycle`` (u_0 -> u_1 -> ... -> u_0) turning
    ``from_state`` into ``to_state``.

    Agents on a cycle can only advance and never overtake each other, so the
    targets are unrolled onto a line: each agent gets the least displacement
    that keeps the cyclic order intact.
    """
    cyc = list(cycle)
    k = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    on = sorted((a for a in from_state if from_state[a] in pos), key=lambda a: pos[from_state[a]])
    for a in from_state:
        if a not in on and from_state[a] != to_state[a]:
            raise NotReachable(f"agent {a} is off the cycle but must move")
    if any(to_state[a] not in pos for a in on) or set(from_state) != set(to_state):
        raise NotReachable("agents on the cycle must stay on it")
    if from_state == to_state:
        return Plan()
    m = len(on)
    if m == k:
        raise NotReachable("cycle is fully occupied; simple moves cannot change it")
    target_order = sorted(on, key=lambda a: pos[to_state[a]])
    i = target_order.index(on[0])
    if target_order[i:] + target_order[:i] != on:
        raise NotReachable("cyclic order of the agents differs")

    p = [pos[from_state[a]] for a in on]
    f = [p[j] + (pos[to_state[a]] - p[j]) % k for j, a in enumerate(on)]
    for _ in range(4 * m + 4):
        changed = False
        for j in range(1, m):
            while f[j] <= f[j - 1]:
                f[j] += k
                changed = True
        if m > 1 and f[m - 1] >= f[0] + k:
            f[0] += k
            changed = True
        if not changed:
            break
    else:
        raise AssertionError("unrolled targets did not settle")

    remaining = [f[j] - p[j] for j in range(m)]
    cur = list(p)
    occupied = {c % k: j for j, c in enumerate(cur)}
    steps = []
    while any(remaining):
        for j in range(m):
            if remaining[j] and (cur[j] + 1) % k not in occupied:
                src, dst = cyc[cur[j] % k], cyc[(cur[j] + 1) % k]
                steps.append(Move(on[j], src, dst))
                del occupied[cur[j] % k]
                cur[j] += 1
                occupied[cur[j] % k] = j
                remaining[j] -= 1
                break
        else:
            raise AssertionError("no agent can advance")
    return Plan(tuple(steps))


def synthesize_inverse_move(g: DiGraph, s: MapfState, m: Move) -> Plan:
    """Plan from ``s[m]`` back to ``s`` using forward arcs only."""
    after = apply_step(g, s, m)
    if g.has_arc(m.dst, m.src):
        return Plan((Move(m.agent, m.dst, m.src),))
    path = shortest_path(g, m.dst, [m.src])
    if path is None:
        raise NotReachable(f"no path from {m.dst} back to {m.src}")
    cycle = [m.src] + path[:-1]
    return undo_on_cycle(cycle, after, s)


def lift_undirected_plan(g: DiGraph, init: MapfState, undirected_plan: Sequence[Move]) -> Plan:
    """Replace every against-arc move by a forward-only plan with the same effect."""
    s = init
    steps = []
    for m in undirected_plan:
        if g.has_arc(m.src, m.dst):
            s = apply_step(g, s, m)
            steps.append(m)
            continue
        reverse = Move(m.agent, m.dst, m.src)
        if not g.has_arc(m.dst, m.src):
            raise ValueError(f"{m.src} and {m.dst} are not adjacent")
        if s.get(m.agent) != m.src or s.occupant(m.dst) is not None:
            raise ValueError(f"move {m} is not legal in the current state")
        t = s.moved({m.agent: m.dst})
        part = synthesize_inverse_move(g, t, reverse)
        steps.extend(part.steps)
        s = t
    return Plan(tuple(steps))


# ---------------------------------------------------------------- words and plans

def rotation_table(cycles: Sequence[Sequence[str]], points: Sequence[str],
                   prefix: str = "ρ") -> dict[str, Permutation]:
    return {f"{prefix}{i + 1}": Permutation.cycle(points, c) for i, c in enumerate(cycles)}


def word_to_rotations(word: GenWord, table: Mapping[str, Permutation],
                      g: DiGraph, state: MapfState, rot2: str = "allow") -> Plan:
    """Realise a word over cycle generators as synchronous rotations.

    Runs of one generator collapse to their net exponent modulo the cycle
    length, so an inverse letter on a k-cycle costs k - 1 forward rotations.
    """
    steps = []
    s = state
    cycles = {name: _cycle_of(p) for name, p in table.items()}
    letters = list(word)
    i = 0
    while i < len(letters):
        name = letters[i][0]
        net = 0
        while i < len(letters) and letters[i][0] == name:
            net += letters[i][1]
            i += 1
        cyc = cycles[name]
        for _ in range(net % len(cyc)):
            r = Rotation.on_cycle(s, cyc)
            s = apply_step(g, s, r, rot2)
            steps.append(r)
    return Plan(tuple(steps))


def _cycle_of(p: Permutation) -> tuple[str, ...]:
    cycles = p.cycles()
    if len(cycles) != 1:
        raise ValueError(f"{p} is not a single cycle")
    return cycles[0]


# ---------------------------------------------------------------- 3-cycle case table

ALPHA, BETA = "α", "β"
_A, _B = GenWord.gen(ALPHA), GenWord.gen(BETA)


def pair_generators(pair: CyclePair, points: Sequence[str] | None = None) -> dict[str, Permutation]:
    """α = (a_1 .. a_r b_s .. b_1) and β = (c_1 .. c_t b_s .. b_1)."""
    pts = tuple(points) if points is not None else pair.nodes
    return {ALPHA: Permutation.cycle(pts, pair.left_cycle),
            BETA: Permutation.cycle(pts, pair.right_cycle)}


def symbolic_pair(r: int, s: int, t: int) -> CyclePair:
    """Cycle pair of type (r,s,t) with nodes named a1.., b1.., c1.."""
    return CyclePair(tuple(f"a{i}" for i in range(1, r + 1)),
                     tuple(f"b{i}" for i in range(1, s + 1)),
                     tuple(f"c{i}" for i in range(1, t + 1)))


def is_t0_type(ptype: tuple[int, int, int]) -> bool:
    return tuple(ptype) in ((1, 3, 2), (2, 2, 2))


def three_cycle_word(ptype: tuple[int, int, int]) -> GenWord | None:
    """Word over α, β expanding to a 3-cycle, or None for the two T0 types."""
    r, s, t = ptype
    if min(r, s, t) < 0 or s < 1 or r > t or r + s < 2 or t + s < 2 or (r == 0 and (s < 3 or t < 1)):
        raise InvalidType(f"({r},{s},{t}) is not a valid cycle-pair type")
    comm = _B * _A.inverse() * _B.inverse() * _A
    eps = GenWord()
    if r == 0 or s == 1:
        return comm
    if r == 1 and s == 2:
        return _A
    if r == 1 and t == 1:
        return _A.inverse() * _B
    if (r, s, t) == (1, 3, 2):
        return None
    if r == 1 and s == 3:
        chi = _B ** 2 * (_A.inverse() * _B) ** 2 * _B ** -2
        return comm.raised(eps, chi.inverse())
    if r == 1:
        return (_A * _B.inverse() * _A.inverse() * _B).conj(_B).raised(eps, _A ** -2)
    if (r, s, t) == (2, 2, 2):
        return None
    return comm.conj(_A).raised(eps, _B ** -2)


# ---------------------------------------------------------------- T0 extensions

T0A = DiGraph.from_adjacency({"a1": ["b3"], "b3": ["b2"], "b2": ["b1"], "b1": ["a1", "c1"],
                              "c1": ["c2"], "c2": ["b3"]})
T0B = DiGraph.from_adjacency({"a1": ["a2"], "a2": ["b2"], "b2": ["b1"], "b1": ["a1", "c1"],
                              "c1": ["c2"], "c2": ["b2"]})
T0_BASES = (((1, 3, 2), T0A), ((2, 2, 2), T0B))


@dataclass(frozen=True)
class Fig9:
    digraph: DiGraph
    generators: dict
    word: GenWord


def _fig9() -> dict[str, Fig9]:
    out = {}
    a = T0A.with_path(["b2", "e1", "c2"])
    cyc = {"α": ("a1", "b3", "b2", "b1"), "β": ("c1", "c2", "b3", "b2", "b1"),
           "γ": ("b2", "e1", "c2", "b3")}
    out["a"] = Fig9(a, {k: Permutation.cycle(a.nodes, c) for k, c in cyc.items()},
                    GenWord.parse("β α β^-1 γ^-1"))
    b = T0B.with_path(["a2", "e2", "e1", "a1"])
    cyc = {"α": ("a1", "a2", "b2", "b1"), "β": ("c1", "c2", "b2", "b1"), "δ": ("a2", "e2", "e1", "a1")}
    out["b"] = Fig9(b, {k: Permutation.cycle(b.nodes, c) for k, c in cyc.items()},
                    GenWord.parse("β^-1 δ^-1 α^-1 β^2 δ^-1 α^-1 δ^-1"))
    c = T0B.with_path(["b1", "e1", "e2", "b2"])
    cyc = {"α": ("a1", "a2", "b2", "b1"), "β": ("c1", "c2", "b2", "b1"), "η": ("b1", "e1", "e2", "b2")}
    out["c"] = Fig9(c, {k: Permutation.cycle(c.nodes, cy) for k, cy in cyc.items()},
                    GenWord.parse("α β η α^-1 β^-1 η^-1"))
    return out


FIG9 = _fig9()


def t0_extension_three_cycle(which: str) -> GenWord:
    return FIG9[which].word


@dataclass(frozen=True)
class T0Extension:
    base: tuple[int, int, int]
    head: str
    tail: str
    ear: tuple[str, ...]
    digraph: DiGraph
    duplicate_of: int | None
    only_t0: bool
    iso: str | None

    @property
    def ear_length(self) -> int:
        return len(self.ear)

    def describe(self) -> str:
        path = "->".join((self.head,) + self.ear + (self.tail,))
        r, s, t = self.base
        return f"base=({r},{s},{t}) ear={path} iso=fig9{self.iso or '?'}"


def only_t0_pairs(g: DiGraph) -> bool:
    """True when every pair of intersecting cycles counts as a T0 type."""
    cycles = simple_cycles(g)
    for c1 in cycles:
        for c2 in cycles:
            if shared_count_type(c1, c2) not in ((2, 2, 2), (1, 3, 2), None):
                return False
    return True


def enumerate_t0_extensions() -> list[T0Extension]:
    """All 6 x 6 x 2 ears on each T0 base graph, deduplicated up to isomorphism."""
    out: list[T0Extension] = []
    distinct: list[int] = []
    for base, g in T0_BASES:
        for head in g.nodes:
            for tail in g.nodes:
                for ear in (("e1",), ("e1", "e2")):
                    d = g.with_path((head,) + ear + (tail,))
                    dup = next((i for i in distinct if are_isomorphic(out[i].digraph, d)), None)
                    flagged = dup is None and only_t0_pairs(d)
                    iso = None
                    if flagged:
                        iso = next((k for k, f in FIG9.items() if are_isomorphic(f.digraph, d)), None)
                    out.append(T0Extension(base, head, tail, ear, d, dup, flagged, iso))
                    if dup is None:
                        distinct.append(len(out) - 1)
    return out


def t0_report(extensions: Sequence[T0Extension]) -> list[str]:
    lines = [f"cases={len(extensions)} distinct={sum(e.duplicate_of is None for e in extensions)}"]
    flagged = [e for e in extensions if e.only_t0]
    lines += [e.describe() for e in flagged]
    lines.append(f"flagged={len(flagged)}")
    return lines


# ---------------------------------------------------------------- pair transport

def _positive_path(point: str, targets: set[str], table: Mapping[str, Permutation]) -> list[str] | None:
    """Shortest generator sequence carrying ``point`` into ``targets``."""
    if point in targets:
        return []
    parent: dict[str, tuple[str, str] | None] = {point: None}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for name, p in table.items():
                y = p(x)
                if y in parent:
                    continue
                parent[y] = (x, name)
                if y in targets:
                    path = []
                    while parent[y] is not None:
                        y, name = parent[y]
                        path.append(name)
                    return path[::-1]
                nxt.append(y)
        frontier = nxt
    return None


class _Tracker:
    """Positions of two tracked agents under a growing list of letters."""

    def __init__(self, table: Mapping[str, Permutation], u: str, v: str, limit: int):
        self.table = table
        self.u, self.v = u, v
        self.letters: list[str] = []
        self.limit = limit

    def apply(self, name: str) -> None:
        if len(self.letters) >= self.limit:
            raise Stuck(f"transport exceeded {self.limit} rotations")
        p = self.table[name]
        self.u, self.v = p(self.u), p(self.v)
        self.letters.append(name)

    def until(self, name: str, cond) -> None:
        k = len(self.table[name].support())
        for _ in range(k):
            if cond():
                return
            self.apply(name)
        if not cond():
            raise Stuck(f"rotating {name} never satisfies the guard")


def _transport_to_pair(table: Mapping[str, Permutation], alpha: str, beta: str,
                       pair: CyclePair, u: str, v: str, limit: int) -> list[str]:
    """Letters carrying the agents at (u, v) to (b_1, c_1)."""
    left, right = set(pair.left_cycle), set(pair.right_cycle)
    nodes = left | right
    a_nodes, b_nodes, c_nodes = set(pair.a_path), set(pair.b_path), set(pair.c_path)
    b1, c1 = pair.b_path[0], pair.c_path[0]
    tr = _Tracker(table, u, v, limit)

    # bring a_u into the pair
    path = _positive_path(tr.u, nodes, table)
    if path is None:
        raise Stuck(f"{u} cannot reach the cycle pair")
    for name in path:
        tr.apply(name)

    # bring a_v into the pair while a_u stays on it
    path = _positive_path(tr.v, nodes, table)
    if path is None:
        raise Stuck(f"{v} cannot reach the cycle pair")
    for name in path:
        g = table[name]
        if g(tr.u) not in nodes:
            guard = None
            for protector in (alpha, beta):
                if tr.u not in set(table[protector].support()):
                    continue
                cyc_nodes = _cycle_of(table[protector])
                start = cyc_nodes.index(tr.u)
                for k in range(len(cyc_nodes)):
                    w = cyc_nodes[(start + k) % len(cyc_nodes)]
                    if g(w) in nodes:
                        guard = (protector, k)
                        break
                if guard:
                    break
            if guard is None:
                raise Stuck(f"no safe node for {tr.u} against {name}")
            for _ in range(guard[1]):
                tr.apply(guard[0])
        tr.apply(name)

    if a_nodes:
        if tr.u in c_nodes:
            tr.until(beta, lambda: tr.u in left)
        if tr.v in c_nodes:
            tr.until(alpha, lambda: tr.u in a_nodes)
        else:
            tr.until(alpha, lambda: tr.u in a_nodes and tr.v in b_nodes)
        tr.until(beta, lambda: tr.v == b1)
        tr.apply(beta)
        tr.until(alpha, lambda: tr.u == b1)
    else:
        # every node lies on the right cycle; shrink the gap from a_u to a_v
        order = list(pair.right_cycle)
        for _ in range(len(order) + 1):
            tr.until(beta, lambda: tr.v == c1)
            if tr.u in b_nodes:
                tr.until(alpha, lambda: tr.u == b1)
                break
            tr.until(beta, lambda: tr.u == pair.b_path[-1])
            for _ in range(len(pair.b_path) - 1):
                tr.apply(alpha)
        else:
            raise Stuck("gap between the agents did not close")
    if (tr.u, tr.v) != (b1, c1):
        raise Stuck("transport ended in the wrong place")
    return tr.letters


def two_transitive_transport(g: DiGraph, pair: CyclePair, src: tuple[str, str], dst: tuple[str, str],
                             state: MapfState | None = None, rot2: str = "allow") -> Plan:
    """Rotation-only plan moving the agents on ``src`` onto ``dst``.

    Both pairs are first carried to (b_1, c_1); the second leg is reversed.
    """
    if src[0] == src[1] or dst[0] == dst[1]:
        raise ValueError("node pairs must be distinct")
    if state is None:
        state = MapfState({v: v for v in g.nodes})
    if src == dst:
        return Plan()
    min_len = 2 if rot2 == "allow" else 3
    cycles = simple_cycles(g, min_len=min_len)
    table = rotation_table(cycles, g.nodes)
    by_cycle = {canonical_cycle(_cycle_of(p)): n for n, p in table.items()}
    alpha = by_cycle[canonical_cycle(pair.left_cycle)]
    beta = by_cycle[canonical_cycle(pair.right_cycle)]
    limit = len(g) ** 3
    first = _transport_to_pair(table, alpha, beta, pair, src[0], src[1], limit)
    second = _transport_to_pair(table, alpha, beta, pair, dst[0], dst[1], limit)
    word = GenWord(tuple((n, 1) for n in first)) * GenWord(tuple((n, 1) for n in second)).inverse()
    return word_to_rotations(word, table, g, state, rot2)


# ---------------------------------------------------------------- blanks

def _shift_path(g: DiGraph, s: MapfState, path: Sequence[str]) -> tuple[MapfState, list[Move]]:
    """Move agents along ``path`` so its first node becomes blank and its last
    node occupied; intermediate blanks keep their positions."""
    cuts = [i for i, v in enumerate(path) if i > 0 and s.occupant(v) is None]
    moves = []
    lo = 0
    for hi in cuts:
        for k in range(hi - 1, lo - 1, -1):
            agent = s.occupant(path[k])
            if agent is None:
                break
            m = Move(agent, path[k], path[k + 1])
            s = apply_step(g, s, m)
            moves.append(m)
        lo = hi
    return s, moves


def blank_normalize(g: DiGraph, init: MapfState, goal: MapfState,
                    with_undo: bool = True) -> tuple[MapfState, Plan, Plan | None]:
    """Move the blanks of ``goal`` onto the blanks of ``init``.

    Returns (goal', plan goal->goal', plan goal'->goal).  Each node that is
    blank in ``init`` but occupied in ``goal`` is paired greedily with the
    nearest blank of ``goal`` that ``init`` occupies.  With ``with_undo``
    false the last plan is not synthesised and None is returned instead.
    """
    occ_init = set(init.values())
    s = goal
    forward: list[Move] = []
    targets = [v for v in g.nodes if v not in occ_init and s.occupant(v) is not None]
    for t in targets:
        sources = [v for v in g.nodes if v in occ_init and s.occupant(v) is None]
        path = shortest_path(g, t, sources)
        if path is None:
            raise NotReachable(f"no blank reachable from {t}")
        s, moves = _shift_path(g, s, path)
        forward.extend(moves)
    if not with_undo:
        return s, Plan(tuple(forward)), None
    # undo each move in reverse order through inverse-move synthesis
    states = [goal]
    for m in forward:
        states.append(apply_step(g, states[-1], m))
    backward: list = []
    for i in range(len(forward) - 1, -1, -1):
        backward.extend(synthesize_inverse_move(g, states[i], forward[i]).steps)
    return s, Plan(tuple(forward)), Plan(tuple(backward))


def emulate_rotation_with_blank(g: DiGraph, cycle: Sequence[str], s: MapfState) -> Plan:
    """Simple moves advancing every agent on ``cycle`` by one arc."""
    cyc = list(cycle)
    k = len(cyc)
    blanks = [i for i, v in enumerate(cyc) if s.occupant(v) is None]
    if not blanks:
        raise FullyOccupied("no blank on the cycle")
    j = blanks[0]
    steps = []
    for d in range(1, k):
        i = (j - d) % k
        agent = s.occupant(cyc[i])
        if agent is None:
            continue
        m = Move(agent, cyc[i], cyc[(i + 1) % k])
        s = apply_step(g, s, m)
        steps.append(m)
    return Plan(tuple(steps))


# ---------------------------------------------------------------- components

def transitive_components(g: DiGraph, rot2: str = "allow",
                          cycles: Sequence[Sequence[str]] | None = None) -> list[tuple[str, ...]]:
    """Orbits of the rotation-induced group via union-find over cycle nodes."""
    if cycles is None:
        cycles = simple_cycles(g, min_len=2 if rot2 == "allow" else 3)
    parent = {v: v for v in g.nodes}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cyc in cycles:
        if rot2 == "forbid" and len(cyc) < 3:
            continue
        root = find(cyc[0])
        for v in cyc[1:]:
            r = find(v)
            if r != root:
                parent[r] = root
    groups: dict[str, list[str]] = {}
    for v in g.nodes:
        groups.setdefault(find(v), []).append(v)
    return sorted((tuple(c) for c in groups.values()), key=lambda c: g.index(c[0]))
