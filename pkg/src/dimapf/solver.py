"""Feasibility decision and plan synthesis.

Rotation-only instances (and fully occupied ones under regime ``both``) are
decided inside the rotation-induced group of the occupied sub-digraph, one
transitive component at a time.  Instances with blanks on strongly
connected digraphs are first blank-normalised; the permutations realisable
by closed walks over occupied-node configurations form a group whose
generators are read off a spanning tree of the configuration graph, and
membership is decided exactly with a stabiliser chain.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from .constructions import (blank_normalize, synthesize_inverse_move, transitive_components,
                            word_to_rotations)
from .graph import DiGraph, is_strongly_connected, undirected_neighbors
from .groups import GroupClass, admitted_cycles, classify_group
from .mapf import Instance, MapfState, Move, Plan, Rotation, apply_step, validate_plan
from .oracle import Reachable, Unreachable, bfs_reachability
from .perm import Permutation, StabChain, factorize, prune_generators

DECIDE_ORACLE_CAP = 200_000


@dataclass
class Decision:
    status: str  # feasible, infeasible, unknown
    certificate: str
    branch: str
    detail: object = field(default=None, repr=False, compare=False)

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def __str__(self) -> str:
        return f"{self.status.upper()} ({self.branch}): {self.certificate}"


def _node_permutation(points: Sequence[str], a: MapfState, b: MapfState) -> Permutation:
    return Permutation.from_mapping(points, {a[r]: b[r] for r in a})


# ---------------------------------------------------------------- rotation route

@dataclass
class _Component:
    nodes: tuple[str, ...]
    gens: dict
    cls: GroupClass


@lru_cache(maxsize=256)
def _rotation_structure(g: DiGraph, occupied: frozenset, rot2: str) -> list[_Component]:
    sub = g.subgraph([v for v in g.nodes if v in occupied])
    cycles = admitted_cycles(sub, rot2)
    comps = []
    for nodes in transitive_components(sub, rot2, cycles):
        cs = [c for c in cycles if c[0] in nodes]
        gens = {f"ρ{i + 1}": Permutation.cycle(nodes, c) for i, c in enumerate(cs)}
        cls = classify_group(sub.subgraph(nodes), gens, rot2) if gens else GroupClass(
            "small", len(nodes), "no admitted cycles", order=1,
            elements=frozenset({Permutation.identity(nodes)}), structure="trivial")
        comps.append(_Component(nodes, gens, cls))
    return comps


def _decide_rotations(inst: Instance, goal: MapfState, branch: str) -> Decision:
    g = inst.digraph
    occ = frozenset(inst.init.values())
    if occ != frozenset(goal.values()):
        return Decision("infeasible", "blank positions differ and rotations never move blanks", branch)
    comps = _rotation_structure(g, occ, inst.rot2)
    points = tuple(v for v in g.nodes if v in occ)
    tau = _node_permutation(points, inst.init, goal)
    notes = []
    for comp in comps:
        image = {tau(v) for v in comp.nodes}
        if image != set(comp.nodes):
            return Decision("infeasible", f"orbit mismatch on component {{{' '.join(comp.nodes)}}}", branch)
        local = tau.restrict(comp.nodes)
        if local.is_identity():
            continue
        member = comp.cls.contains(local)
        how = str(comp.cls)
        if member is None:
            member = StabChain(len(comp.nodes), [p.images for p in comp.gens.values()]).contains(local.images)
            how = f"stabiliser chain (order {comp.cls.order})"
        if not member:
            why = {"alternating": "odd permutation in the alternating group",
                   "cyclic": "not a cyclic shift of the component"}.get(comp.cls.kind, "not in the group")
            return Decision("infeasible", f"{why} on {{{' '.join(comp.nodes)}}} [{how}]", branch)
        notes.append(f"{{{' '.join(comp.nodes)}}}: {how} ({comp.cls.reason})")
    return Decision("feasible", "; ".join(notes) or "identity", branch, detail=(comps, tau))


def rotation_cost(gens: dict):
    """Rotations needed for a letter: 1 forward, k - 1 for an inverse."""
    sizes = {name: len(p.support()) for name, p in gens.items()}
    return lambda letter: 1 if letter[1] > 0 else sizes[letter[0]] - 1


STRATEGIES = ("auto", "constructive")


def _search_limit(strategy: str) -> int:
    # "constructive" skips exhaustive word search so lengths reflect the
    # 3-cycle construction at every size
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    return 50_000 if strategy == "auto" else 0


def _plan_rotations(inst: Instance, start: MapfState, goal: MapfState, comps, tau: Permutation,
                    strategy: str = "auto") -> Plan:
    g = inst.digraph
    s = start
    steps: list = []
    for comp in comps:
        local = tau.restrict(comp.nodes)
        if local.is_identity():
            continue
        hints = [comp.cls.three_cycle] if comp.cls.three_cycle is not None else []
        large = {comp.cls.kind, comp.cls.structure} & {"symmetric", "alternating"}
        limit = _search_limit(strategy) if large else 50_000
        word = factorize(local, comp.gens, hints=hints, cost=rotation_cost(comp.gens), bfs_limit=limit)
        part = word_to_rotations(word, comp.gens, g, s, inst.rot2)
        for st in part:
            s = apply_step(g, s, st, inst.rot2)
        steps.extend(part.steps)
    return Plan(tuple(steps))


# ---------------------------------------------------------------- configuration group

@dataclass
class _ConfigFrame:
    """Configuration group at a base occupied set, shared by every occupied
    set with the same number of agents."""

    base: tuple[str, ...]
    phi: dict  # occupied set -> node map from the base to it along the tree
    path: dict  # occupied set -> node-level steps from the base to it
    gens: dict  # name -> Permutation of the base nodes
    recipes: dict  # name -> node-level steps, a closed walk at the base
    chain: StabChain
    configs: int


class _ConfigGroup:
    """Configuration group at one occupied set, conjugated from its frame."""

    def __init__(self, g: DiGraph, frame: _ConfigFrame, occupied: frozenset):
        self.frame = frame
        self.points = tuple(v for v in g.nodes if v in occupied)
        self.psi = frame.phi[occupied]  # base node -> occupied node
        self.back = {y: x for x, y in self.psi.items()}
        self.path = frame.path[occupied]

    def contains(self, tau: Permutation) -> bool:
        """Membership by conjugating ``tau`` back to the base frame."""
        base = self.frame.base
        images = [base.index(self.back[tau(self.psi[b])]) for b in base]
        return self.frame.chain.contains(tuple(images))

    @cached_property
    def gens(self) -> dict:
        return {name: Permutation.from_mapping(self.points, {x: self.psi[p(self.back[x])] for x in self.points})
                for name, p in self.frame.gens.items()}

    @cached_property
    def recipes(self) -> dict:
        to_base = _invert_recipe(self.path)
        return {name: to_base + r + self.path for name, r in self.frame.recipes.items()}


def _apply_node_map(f: dict, u: str, v: str) -> dict:
    return {x: (v if y == u else y) for x, y in f.items()}


@lru_cache(maxsize=256)
def _config_frame(g: DiGraph, m: int, rotations: bool, rot2: str) -> _ConfigFrame:
    base = g.nodes[:m]
    cycles = admitted_cycles(g, rot2) if rotations else []
    start = frozenset(base)
    phi = {start: {v: v for v in base}}
    path = {start: []}
    order = [start]
    edges = []
    for conf in order:
        for u in sorted(conf, key=g.index):
            for w in undirected_neighbors(g, u):
                if w in conf:
                    continue
                nxt = (conf - {u}) | {w}
                if nxt not in phi:
                    phi[nxt] = _apply_node_map(phi[conf], u, w)
                    path[nxt] = path[conf] + [("move", u, w)]
                    order.append(nxt)
                else:
                    edges.append((conf, u, w, nxt))
    gens: dict[str, Permutation] = {}
    recipes: dict[str, list] = {}

    def add(name: str, f: dict, recipe: list):
        perm = Permutation.from_mapping(base, f)
        if not perm.is_identity():
            gens[name] = perm
            recipes[name] = recipe

    inv = {conf: {y: x for x, y in f.items()} for conf, f in phi.items()}
    for i, (conf, u, w, nxt) in enumerate(edges):
        f = _apply_node_map(phi[conf], u, w)
        f = {x: inv[nxt][y] for x, y in f.items()}
        add(f"λ{i + 1}", f, path[conf] + [("move", u, w)] + _invert_recipe(path[nxt]))
    j = 0
    for conf in order:
        for c in cycles:
            if all(v in conf for v in c):
                j += 1
                rot = {c[k]: c[(k + 1) % len(c)] for k in range(len(c))}
                f = {x: inv[conf][rot.get(y, y)] for x, y in phi[conf].items()}
                add(f"κ{j}", f, path[conf] + [("rot", tuple(c))] + _invert_recipe(path[conf]))
    chain = StabChain(len(base), [p.images for p in gens.values()])
    return _ConfigFrame(tuple(base), phi, path, gens, recipes, chain, len(order))


@lru_cache(maxsize=4096)
def _config_group(g: DiGraph, occupied: frozenset, rotations: bool, rot2: str) -> _ConfigGroup:
    return _ConfigGroup(g, _config_frame(g, len(occupied), rotations, rot2), occupied)


def _decide_configs(inst: Instance, branch: str) -> Decision:
    g = inst.digraph
    goal2, _, _ = blank_normalize(g, inst.init, inst.goal, with_undo=False)
    occ = frozenset(inst.init.values())
    cg = _config_group(g, occ, inst.allows_rotations, inst.rot2)
    tau = _node_permutation(cg.points, inst.init, goal2)
    detail = (cg, tau, goal2)
    size = f"order {cg.frame.chain.order()}, {cg.frame.configs} configurations"
    if cg.contains(tau):
        return Decision("feasible", f"blank-normalised permutation {tau} lies in the configuration "
                        f"group ({size})", branch, detail)
    return Decision("infeasible", f"blank-normalised permutation {tau} is outside the configuration "
                    f"group ({size})", branch, detail)


def _realise_node_move(g: DiGraph, s: MapfState, u: str, v: str) -> list:
    agent = s.occupant(u)
    if g.has_arc(u, v):
        return [Move(agent, u, v)]
    t = s.moved({agent: v})
    return list(synthesize_inverse_move(g, t, Move(agent, v, u)).steps)


def _plan_configs(inst: Instance, cg: _ConfigGroup, tau: Permutation, suffix: Plan,
                  strategy: str = "auto") -> Plan:
    g = inst.digraph
    steps: list = []
    if not tau.is_identity():
        pruned = prune_generators(cg.gens, key=lambda n: (len(cg.recipes[n]), n))
        word = factorize(tau, pruned, cost=lambda letter: len(cg.recipes[letter[0]]),
                         bfs_limit=_search_limit(strategy))
        s = inst.init
        for name, e in word:
            recipe = cg.recipes[name]
            if e < 0:
                recipe = _invert_recipe(recipe)
            for st in recipe:
                if st[0] == "move":
                    part = _realise_node_move(g, s, st[1], st[2])
                else:
                    part = [Rotation.on_cycle(s, st[1])]
                for p in part:
                    s = apply_step(g, s, p, inst.rot2)
                steps.extend(part)
    return Plan(tuple(steps)) + suffix


def _invert_recipe(recipe: list) -> list:
    out = []
    for st in reversed(recipe):
        if st[0] == "move":
            out.append(("move", st[2], st[1]))
        else:
            out.extend([st] * (len(st[1]) - 1))
    return out


# ---------------------------------------------------------------- public API

def decide(inst: Instance, oracle_cap: int = DECIDE_ORACLE_CAP) -> Decision:
    g = inst.digraph
    if inst.init == inst.goal:
        return Decision("feasible", "initial state equals goal", "identity")
    if inst.regime == "rotation":
        return _decide_rotations(inst, inst.goal, "rotation group")
    full = len(inst.agents) == len(g)
    if is_strongly_connected(g):
        if full:
            if inst.regime == "simple":
                return Decision("infeasible", "no blank, so no simple move is ever legal", "no blank")
            return _decide_rotations(inst, inst.goal, "rotation group (no blank)")
        return _decide_configs(inst, "configuration group")
    res = bfs_reachability(inst, oracle_cap)
    if isinstance(res, Reachable):
        return Decision("feasible", f"oracle plan of {len(res.plan)} steps", "oracle", detail=res.plan)
    if isinstance(res, Unreachable):
        return Decision("infeasible", f"oracle exhausted {res.visited} states", "oracle")
    return Decision("unknown", f"digraph not strongly connected; oracle cap {oracle_cap} exceeded", "oracle")


class PlanningBug(AssertionError):
    pass


def plan(inst: Instance, decision: Decision | None = None, strategy: str = "auto") -> Plan | None:
    """Plan for a feasible instance, validated before it is returned.

    ``strategy="auto"`` finds cheapest words by exhaustive search whenever the
    group is small; ``"constructive"`` always uses conjugated 3-cycles for
    alternating and symmetric groups.
    """
    d = decision or decide(inst)
    if not d.feasible:
        return None
    if d.branch == "identity":
        p = Plan()
    elif d.branch == "oracle":
        p = d.detail
    elif d.branch.startswith("rotation group"):
        comps, tau = d.detail
        p = _plan_rotations(inst, inst.init, inst.goal, comps, tau, strategy)
    else:
        cg, tau, goal2 = d.detail
        _, _, suffix = blank_normalize(inst.digraph, inst.init, inst.goal)
        p = _plan_configs(inst, cg, tau, suffix, strategy)
    verdict = validate_plan(inst, p)
    if not verdict.ok:
        raise PlanningBug(f"synthesised plan failed validation: {verdict}")
    return p


# ---------------------------------------------------------------- bench

FAMILIES = ("cycle-shift", "pbc", "ladder", "random-sc")


def _cycle_graph(n: int, backward: int = 0) -> DiGraph:
    nodes = [f"v{i}" for i in range(n)]
    arcs = [(nodes[i], nodes[(i + 1) % n]) for i in range(n)]
    arcs += [(nodes[(i + 1) % n], nodes[i]) for i in range(backward)]
    return DiGraph(nodes, arcs)


def _random_word_state(g: DiGraph, s: MapfState, rot2: str, rng: random.Random, length: int) -> MapfState:
    cycles = admitted_cycles(g, rot2)
    for _ in range(length):
        s = apply_step(g, s, Rotation.on_cycle(s, rng.choice(cycles)), rot2)
    return s


def _random_sc(n: int, rng: random.Random) -> DiGraph:
    nodes = [f"v{i}" for i in range(n)]
    while True:
        order = nodes[:]
        rng.shuffle(order)
        arcs = {(order[i], order[(i + 1) % n]) for i in range(n)}
        for _ in range(n // 2 + 1):
            u, v = rng.sample(nodes, 2)
            arcs.add((u, v))
        g = DiGraph(nodes, arcs)
        if is_strongly_connected(g):
            return g


def bench_instance(family: str, n: int, rng: random.Random) -> Instance:
    if family == "cycle-shift":
        g = _cycle_graph(n)
        init = MapfState({f"r{i}": f"v{i}" for i in range(n)})
        goal = MapfState({f"r{i}": f"v{(i + 2) % n}" for i in range(n)})
        return Instance(g, tuple(init), init, goal, "rotation", "forbid")
    if family == "pbc":
        g = _cycle_graph(n, backward=1)
        init = MapfState({f"r{i}": f"v{i}" for i in range(n)})
        perm = list(g.nodes)
        rng.shuffle(perm)
        goal = MapfState({f"r{i}": perm[i] for i in range(n)})
        return Instance(g, tuple(init), init, goal, "rotation", "allow")
    if family == "ladder":
        # two cycles through one shared node, split as evenly as possible
        r = (n - 1) // 2
        a = [f"a{i}" for i in range(1, r + 1)]
        c = [f"c{i}" for i in range(1, n - r)]
        left, right = a + ["b1"], c + ["b1"]
        arcs = {(x[i], x[(i + 1) % len(x)]) for x in (left, right) for i in range(len(x))}
        g = DiGraph(a + ["b1"] + c, arcs)
        init = MapfState({f"r{i}": v for i, v in enumerate(g.nodes)})
        goal = _random_word_state(g, init, "forbid", rng, 3 * n)
        return Instance(g, tuple(init), init, goal, "rotation", "forbid")
    if family == "random-sc":
        g = _random_sc(n, rng)
        blank = rng.choice(g.nodes)
        init = MapfState({f"r{i}": v for i, v in enumerate(x for x in g.nodes if x != blank)})
        inst = Instance(g, tuple(init), init, init, "both", "allow")
        s = init
        cycles = admitted_cycles(g, "allow")
        for _ in range(4 * n):
            options = [Move(a, s[a], w) for a in sorted(s) for w in g.succ(s[a]) if s.occupant(w) is None]
            options += [Rotation.on_cycle(s, c) for c in cycles if all(s.occupant(v) for v in c)]
            s = apply_step(g, s, rng.choice(options), "allow")
        return inst.replace(goal=s)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


@dataclass
class BenchRow:
    n: int
    length: int
    optimal: int | None
    valid: bool
    ms: float

    def __str__(self) -> str:
        opt = "-" if self.optimal is None else str(self.optimal)
        return f"{self.n} {self.length} {opt} {str(self.valid).lower()} {self.ms:.1f}"


def bench(family: str, sizes: Sequence[int], seed: int = 0, oracle_cap: int = 200_000,
          strategy: str = "constructive") -> list[BenchRow]:
    rows = []
    for n in sizes:
        rng = random.Random(f"{family}:{n}:{seed}")
        inst = bench_instance(family, n, rng)
        t0 = time.perf_counter()
        p = plan(inst, strategy=strategy)
        ms = (time.perf_counter() - t0) * 1000
        if p is None:
            raise PlanningBug(f"bench instance {family} n={n} judged infeasible")
        valid = validate_plan(inst, p).ok
        optimal = None
        if math.perm(len(inst.digraph), len(inst.agents)) <= oracle_cap:
            res = bfs_reachability(inst, oracle_cap)
            if isinstance(res, Reachable):
                optimal = len(res.plan)
        rows.append(BenchRow(n, len(p), optimal, valid, ms))
    return rows


def bench_report(rows: Sequence[BenchRow]) -> list[str]:
    return ["# n len opt valid ms"] + [str(r) for r in rows]


def fitted_exponent(rows: Sequence[BenchRow]) -> float:
    """Least-squares slope of log(length) against log(n)."""
    pts = [(math.log(r.n), math.log(max(r.length, 1))) for r in rows]
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    den = sum((x - mx) ** 2 for x, _ in pts)
    return sum((x - mx) * (y - my) for x, y in pts) / den if den else 0.0
