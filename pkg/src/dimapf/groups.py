"""Rotation-induced permutation groups and their classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping, Sequence

from .constructions import ALPHA, BETA, FIG9, is_t0_type, three_cycle_word
from .graph import (DiGraph, canonical_cycle, cycle_pairs, find_embedding,
                    is_partially_bidirectional_cycle, simple_cycles)
from .oracle import enumerate_group
from .perm import (GenWord, Permutation, group_chain, is_2_transitive, is_transitive,
                   find_three_cycle)

SMALL_CUTOFF = 7


def admitted_cycles(g: DiGraph, rot2: str = "allow") -> list[tuple[str, ...]]:
    return simple_cycles(g, min_len=2 if rot2 == "allow" else 3)


def rotation_generators(g: DiGraph, rot2: str = "allow",
                        points: Sequence[str] | None = None) -> dict[str, Permutation]:
    """One generator ``ρi`` per admitted directed cycle, acting on ``points``."""
    pts = tuple(points) if points is not None else g.nodes
    return {f"ρ{i + 1}": Permutation.cycle(pts, c)
            for i, c in enumerate(admitted_cycles(g, rot2))}


@dataclass
class GroupClass:
    kind: str  # symmetric, alternating, cyclic, small, undetermined
    degree: int
    reason: str
    order: int | None = None
    elements: frozenset | None = field(default=None, repr=False)
    structure: str | None = None
    three_cycle: GenWord | None = None
    cycle: tuple[str, ...] | None = None

    def __str__(self) -> str:
        n = self.degree
        if self.kind == "symmetric":
            return f"S{n}"
        if self.kind == "alternating":
            return f"A{n}"
        if self.kind == "cyclic":
            return f"C{n}"
        if self.kind == "small":
            extra = f", {self.structure}" if self.structure else ""
            return f"small(order {self.order}{extra})"
        return "undetermined"

    def contains(self, p: Permutation) -> bool | None:
        """Membership, or None when the class alone cannot tell."""
        if p.is_identity():
            return True
        if self.kind == "symmetric":
            return True
        if self.kind == "alternating":
            return p.is_even()
        if self.kind == "small":
            return p in self.elements
        if self.kind == "cyclic":
            order = self.cycle
            k = len(order)
            shift = order.index(p(order[0])) if p(order[0]) in order else None
            if shift is None:
                return False
            return all(p(order[i]) == order[(i + shift) % k] for i in range(k))
        return None


def _name_of(table: Mapping[str, Permutation], cycle: Sequence[str]) -> str | None:
    want = canonical_cycle(cycle)
    for name, p in table.items():
        cs = p.cycles()
        if len(cs) == 1 and canonical_cycle(cs[0]) == want:
            return name
    return None


def certify_three_cycle(g: DiGraph, table: Mapping[str, Permutation],
                        cycles: Sequence[tuple[str, ...]] | None = None) -> tuple[GenWord, str] | None:
    """A word over ``table`` whose expansion is a 3-cycle, with its source.

    Tries the cycle-pair case table, then embeddings of the three exceptional
    T0 extensions, then a short search over products of generators.
    """
    pts = next(iter(table.values())).points
    if cycles is None:
        cycles = [p.cycles()[0] for p in table.values()]
    for pair in cycle_pairs(g, cycles):
        if is_t0_type(pair.type):
            continue
        word = three_cycle_word(pair.type)
        names = {ALPHA: _name_of(table, pair.left_cycle), BETA: _name_of(table, pair.right_cycle)}
        if None in names.values():
            continue
        mapped = GenWord(tuple((names[n], e) for n, e in word))
        if mapped.expand(table, pts).cycle_type() == [3]:
            return mapped, f"cycle pair {pair.type}"
    for which, fig in FIG9.items():
        emb = find_embedding(fig.digraph, g)
        if emb is None:
            continue
        names = {}
        for n, p in fig.generators.items():
            names[n] = _name_of(table, [emb[v] for v in p.cycles()[0]])
        if None in names.values():
            continue
        mapped = GenWord(tuple((names[n], e) for n, e in fig.word))
        if mapped.expand(table, pts).cycle_type() == [3]:
            return mapped, f"T0 extension fig9{which}"
    found = find_three_cycle(table)
    if found is not None:
        return found, "generator search"
    return None


def classify_group(g: DiGraph, gens: Mapping[str, Permutation] | None = None,
                   rot2: str = "allow") -> GroupClass:
    """Classify the group generated by the admitted rotations of ``g``.

    ``g`` should be one transitive component.  Every branch is backed by a
    computed check; nothing is inferred from the graph shape alone unless
    the shape determines the group outright.
    """
    if gens is None:
        gens = rotation_generators(g, rot2)
    n = len(g)
    if not gens:
        return GroupClass("small" if n < SMALL_CUTOFF else "undetermined", n,
                          "no admitted cycles", order=1,
                          elements=frozenset({Permutation.identity(g.nodes)}), structure="trivial")
    perms = list(gens.values())
    if not is_transitive(perms, g.nodes):
        return GroupClass("undetermined", n, "generators are not transitive on the component")
    pbc = is_partially_bidirectional_cycle(g) if n >= 3 else None
    if n < SMALL_CUTOFF:
        elements = frozenset(enumerate_group(g, rot2, points=g.nodes))
        order = len(elements)
        structure = None
        if order == factorial(n):
            structure = "symmetric"
        elif order == factorial(n) // 2 and n >= 3:
            structure = "alternating"
        elif pbc and order == n:
            structure = "cyclic"
        return GroupClass("small", n, "enumerated", order=order, elements=elements,
                          structure=structure, cycle=pbc.order if pbc else None)
    if pbc:
        if rot2 == "forbid" or not pbc.backward:
            return GroupClass("cyclic", n, "partially bidirectional cycle without usable 2-cycles",
                              order=n, cycle=pbc.order)
        return GroupClass("symmetric", n,
                          f"partially bidirectional cycle with {len(pbc.backward)} backward arc(s)",
                          order=factorial(n))
    cert = certify_three_cycle(g, gens)
    odd = [name for name, p in gens.items() if not p.is_even()]
    if cert is not None and is_2_transitive(perms, g.nodes):
        word, source = cert
        if odd:
            size = len(gens[odd[0]].support())
            return GroupClass("symmetric", n, f"3-cycle from {source}, 2-transitive, odd generator "
                              f"{odd[0]} of size {size}", order=factorial(n), three_cycle=word)
        return GroupClass("alternating", n, f"3-cycle from {source}, 2-transitive, all generators even",
                          order=factorial(n) // 2, three_cycle=word)
    order = group_chain(gens).order()
    if order == factorial(n):
        return GroupClass("symmetric", n, "stabiliser chain order", order=order)
    if order == factorial(n) // 2:
        return GroupClass("alternating", n, "stabiliser chain order", order=order)
    return GroupClass("undetermined", n, f"no 3-cycle certificate; order {order}", order=order)
