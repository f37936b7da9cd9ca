"""Plain-text instance and plan files.

Instance grammar, one directive per line, '#' starts a comment::

    node <id> | arc <u> <v> | edge <u> <v> | agent <a>
    init <a> <v> | goal <a> <v> | regime simple|rotation|both | rot2 allow|forbid

Plan grammar, one step per line::

    move <agent> <from> <to>
    rot <agent>:<from>»<to> <agent>:<from>»<to> ...
"""

from __future__ import annotations

from typing import Iterable

from .graph import DiGraph
from .mapf import REGIMES, ROT2_POLICIES, Instance, MapfState, Move, Plan, Rotation


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _tokens(text: str) -> Iterable[tuple[int, list[tuple[int, str]]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for part in line.split():
            col = line.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield lineno, toks


_ARITY = {"node": 1, "arc": 2, "edge": 2, "agent": 1, "init": 2, "goal": 2, "regime": 1, "rot2": 1}


def parse_instance(text: str) -> Instance:
    nodes: list[str] = []
    arcs: list[tuple[str, str]] = []
    agents: list[str] = []
    init: dict[str, str] = {}
    goal: dict[str, str] = {}
    regime, rot2 = "both", "allow"
    where: dict[str, tuple[int, int]] = {}

    for lineno, toks in _tokens(text):
        col, word = toks[0]
        if word not in _ARITY:
            raise ParseError(lineno, col, f"unknown directive {word!r}")
        args = toks[1:]
        if len(args) != _ARITY[word]:
            raise ParseError(lineno, col, f"{word} takes {_ARITY[word]} argument(s), got {len(args)}")
        vals = [a for _, a in args]
        if word == "node":
            if vals[0] in nodes:
                raise ParseError(lineno, args[0][0], f"duplicate node {vals[0]}")
            nodes.append(vals[0])
        elif word in ("arc", "edge"):
            for (c, v) in args:
                if v not in nodes:
                    raise ParseError(lineno, c, f"unknown node {v}")
            if vals[0] == vals[1]:
                raise ParseError(lineno, args[1][0], "self-loops are not allowed")
            arcs.append((vals[0], vals[1]))
            if word == "edge":
                arcs.append((vals[1], vals[0]))
        elif word == "agent":
            if vals[0] in agents:
                raise ParseError(lineno, args[0][0], f"duplicate agent {vals[0]}")
            agents.append(vals[0])
        elif word in ("init", "goal"):
            target = init if word == "init" else goal
            if vals[0] not in agents:
                raise ParseError(lineno, args[0][0], f"unknown agent {vals[0]}")
            if vals[1] not in nodes:
                raise ParseError(lineno, args[1][0], f"unknown node {vals[1]}")
            if vals[0] in target:
                raise ParseError(lineno, args[0][0], f"{word} position of {vals[0]} given twice")
            if vals[1] in target.values():
                raise ParseError(lineno, args[1][0], f"node {vals[1]} already used in {word}")
            target[vals[0]] = vals[1]
            where[f"{word}:{vals[0]}"] = (lineno, col)
        elif word == "regime":
            if vals[0] not in REGIMES:
                raise ParseError(lineno, args[0][0], f"regime must be one of {', '.join(REGIMES)}")
            regime = vals[0]
        elif word == "rot2":
            if vals[0] not in ROT2_POLICIES:
                raise ParseError(lineno, args[0][0], f"rot2 must be one of {', '.join(ROT2_POLICIES)}")
            rot2 = vals[0]

    last = (text.count("\n") + 1, 1)
    for a in agents:
        for label, target in (("init", init), ("goal", goal)):
            if a not in target:
                raise ParseError(*last, f"agent {a} has no {label} position")
    if not nodes:
        raise ParseError(*last, "instance has no nodes")
    try:
        g = DiGraph(nodes, arcs)
        return Instance(g, tuple(agents), MapfState(init), MapfState(goal), regime, rot2)
    except ValueError as exc:
        raise ParseError(*last, str(exc)) from None


def serialize_instance(inst: Instance) -> str:
    g = inst.digraph
    lines = [f"node {v}" for v in g.nodes]
    lines += [f"arc {u} {v}" for u, v in g.sorted_arcs()]
    lines += [f"agent {a}" for a in inst.agents]
    lines += [f"init {a} {inst.init[a]}" for a in inst.agents]
    lines += [f"goal {a} {inst.goal[a]}" for a in inst.agents]
    lines += [f"regime {inst.regime}", f"rot2 {inst.rot2}"]
    return "\n".join(lines) + "\n"


def parse_plan(text: str) -> Plan:
    steps = []
    for lineno, toks in _tokens(text):
        col, word = toks[0]
        if word == "move":
            if len(toks) != 4:
                raise ParseError(lineno, col, "move takes <agent> <from> <to>")
            try:
                steps.append(Move(toks[1][1], toks[2][1], toks[3][1]))
            except ValueError as exc:
                raise ParseError(lineno, col, str(exc)) from None
        elif word == "rot":
            moves = []
            for c, tok in toks[1:]:
                agent, sep, rest = tok.partition(":")
                src, arrow, dst = rest.partition("»")
                if not sep or not arrow or not agent or not src or not dst:
                    raise ParseError(lineno, c, f"expected <agent>:<from>»<to>, got {tok!r}")
                try:
                    moves.append(Move(agent, src, dst))
                except ValueError as exc:
                    raise ParseError(lineno, c, str(exc)) from None
            try:
                steps.append(Rotation(tuple(moves)))
            except ValueError as exc:
                raise ParseError(lineno, col, str(exc)) from None
        else:
            raise ParseError(lineno, col, f"unknown step {word!r}")
    return Plan(tuple(steps))


def serialize_plan(plan: Plan) -> str:
    return "".join(f"{step}\n" for step in plan)
