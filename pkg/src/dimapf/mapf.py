"""Instances, states and the exact semantics of simple moves and rotations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .graph import DiGraph

REGIMES = ("simple", "rotation", "both")
ROT2_POLICIES = ("allow", "forbid")


class IllegalStep(ValueError):
    pass


class IllegalMove(IllegalStep):
    pass


class IllegalRotation(IllegalStep):
    pass


class PlanError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class MapfState(Mapping[str, str]):
    """Injective assignment of agents to nodes (immutable)."""

    __slots__ = ("_pos", "_at", "_hash")

    def __init__(self, assignment: Mapping[str, str] | Iterable[tuple[str, str]] = ()):
        pos = dict(assignment)
        at = {}
        for agent, node in pos.items():
            if node in at:
                raise ValueError(f"agents {at[node]} and {agent} share node {node}")
            at[node] = agent
        self._pos = pos
        self._at = at
        self._hash = hash(frozenset(pos.items()))

    def __getitem__(self, agent: str) -> str:
        return self._pos[agent]

    def __iter__(self) -> Iterator[str]:
        return iter(self._pos)

    def __len__(self) -> int:
        return len(self._pos)

    def __contains__(self, agent: object) -> bool:
        return agent in self._pos

    # dict views are much faster than the generic Mapping ones
    def keys(self):
        return self._pos.keys()

    def values(self):
        return self._pos.values()

    def items(self):
        return self._pos.items()

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MapfState):
            return self._pos == other._pos
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{a}@{v}" for a, v in sorted(self._pos.items()))
        return f"MapfState({body})"

    def occupant(self, node: str) -> str | None:
        return self._at.get(node)

    def occupied(self) -> frozenset[str]:
        return frozenset(self._at)

    def blanks(self, g: DiGraph) -> list[str]:
        return [v for v in g.nodes if v not in self._at]

    def moved(self, changes: Mapping[str, str]) -> "MapfState":
        pos = dict(self._pos)
        pos.update(changes)
        return MapfState(pos)


@dataclass(frozen=True)
class Move:
    agent: str
    src: str
    dst: str

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError("a move needs distinct endpoints")

    def __str__(self) -> str:
        return f"move {self.agent} {self.src} {self.dst}"


@dataclass(frozen=True)
class Rotation:
    """Synchronous move of every agent on a directed cycle one arc forward.

    ``moves[i]`` carries the agent on ``u_i`` to ``u_{i+1}``; the first move
    starts at the smallest node label.
    """

    moves: tuple[Move, ...]

    def __post_init__(self):
        k = len(self.moves)
        if k < 2:
            raise ValueError("a rotation needs at least two moves")
        nodes = [m.src for m in self.moves]
        if len(set(nodes)) != k:
            raise ValueError("rotation nodes must be distinct")
        for i, m in enumerate(self.moves):
            if m.dst != self.moves[(i + 1) % k].src:
                raise ValueError("rotation moves do not form a cycle")

    @classmethod
    def on_cycle(cls, state: Mapping[str, str] | "MapfState", cycle: Sequence[str]) -> "Rotation":
        if not isinstance(state, MapfState):
            state = MapfState(state)
        i = min(range(len(cycle)), key=lambda j: cycle[j])
        cyc = list(cycle[i:]) + list(cycle[:i])
        moves = []
        for j, u in enumerate(cyc):
            agent = state.occupant(u)
            if agent is None:
                raise IllegalRotation(f"node {u} on the cycle is blank")
            moves.append(Move(agent, u, cyc[(j + 1) % len(cyc)]))
        return cls(tuple(moves))

    @property
    def cycle(self) -> tuple[str, ...]:
        return tuple(m.src for m in self.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def __str__(self) -> str:
        return "rot " + " ".join(f"{m.agent}:{m.src}»{m.dst}" for m in self.moves)


Step = Union[Move, Rotation]


@dataclass(frozen=True)
class Plan:
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Step]:
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def __add__(self, other: "Plan") -> "Plan":
        return Plan(self.steps + tuple(other.steps))

    def count(self, kind: type) -> int:
        return sum(isinstance(s, kind) for s in self.steps)


@dataclass(frozen=True)
class Instance:
    digraph: DiGraph
    agents: tuple[str, ...]
    init: MapfState
    goal: MapfState
    regime: str = "both"
    rot2: str = "allow"

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.rot2 not in ROT2_POLICIES:
            raise ValueError(f"unknown rot2 policy {self.rot2!r}")
        agents = tuple(self.agents)
        object.__setattr__(self, "agents", agents)
        if len(set(agents)) != len(agents):
            raise ValueError("duplicate agent names")
        if len(agents) > len(self.digraph):
            raise ValueError("more agents than nodes")
        for label, st in (("init", self.init), ("goal", self.goal)):
            if set(st) != set(agents):
                raise ValueError(f"{label} state does not place exactly the instance agents")
            for v in st.values():
                if v not in self.digraph:
                    raise ValueError(f"{label} state uses unknown node {v}")

    @property
    def allows_moves(self) -> bool:
        return self.regime in ("simple", "both")

    @property
    def allows_rotations(self) -> bool:
        return self.regime in ("rotation", "both")

    def replace(self, **changes) -> "Instance":
        fields = dict(digraph=self.digraph, agents=self.agents, init=self.init,
                      goal=self.goal, regime=self.regime, rot2=self.rot2)
        fields.update(changes)
        return Instance(**fields)


# ---------------------------------------------------------------- semantics

def apply_step(g: DiGraph, s: MapfState, step: Step, rot2: str = "allow") -> MapfState:
    if isinstance(step, Move):
        if step.agent not in s:
            raise IllegalMove(f"unknown agent {step.agent}")
        if s[step.agent] != step.src:
            raise IllegalMove(f"{step.agent} is at {s[step.agent]}, not {step.src}")
        if not g.has_arc(step.src, step.dst):
            raise IllegalMove(f"no arc {step.src}->{step.dst}")
        if s.occupant(step.dst) is not None:
            raise IllegalMove(f"target {step.dst} is occupied by {s.occupant(step.dst)}")
        return s.moved({step.agent: step.dst})
    if isinstance(step, Rotation):
        if len(step) == 2 and rot2 == "forbid":
            raise IllegalRotation("rotations on two nodes are forbidden")
        changes = {}
        for m in step.moves:
            if not g.has_arc(m.src, m.dst):
                raise IllegalRotation(f"no arc {m.src}->{m.dst}")
            if m.agent not in s or s[m.agent] != m.src:
                raise IllegalRotation(f"{m.agent} is not at {m.src}")
            changes[m.agent] = m.dst
        return s.moved(changes)
    raise TypeError(f"not a step: {step!r}")


def apply_plan(inst: Instance, plan: Plan | Iterable[Step]) -> MapfState:
    """Execute ``plan`` from the initial state; PlanError names the first bad step."""
    s = inst.init
    for i, step in enumerate(plan):
        if isinstance(step, Move) and not inst.allows_moves:
            raise PlanError(i, "simple moves are not allowed in this regime")
        if isinstance(step, Rotation) and not inst.allows_rotations:
            raise PlanError(i, "rotations are not allowed in this regime")
        try:
            s = apply_step(inst.digraph, s, step, inst.rot2)
        except IllegalStep as exc:
            raise PlanError(i, str(exc)) from None
    return s


@dataclass(frozen=True)
class Verdict:
    status: str  # "valid", "wrong-final" or "invalid"
    index: int | None = None
    reason: str = ""
    final: MapfState | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == "valid"

    def __str__(self) -> str:
        if self.status == "valid":
            return "VALID (reaches goal)"
        if self.status == "wrong-final":
            return "VALID-BUT-WRONG-FINAL"
        return f"INVALID at step {self.index}: {self.reason}"


def validate_plan(inst: Instance, plan: Plan | Iterable[Step]) -> Verdict:
    try:
        final = apply_plan(inst, plan)
    except PlanError as exc:
        return Verdict("invalid", exc.index, exc.reason)
    if final == inst.goal:
        return Verdict("valid", final=final)
    return Verdict("wrong-final", reason="final state differs from goal", final=final)
