"""Permutations on node labels, generator words and permutation groups.

Composition is applied left to right: ``(a * b)(x) == b(a(x))``.  Every
formula in this package (conjugation, word expansion, rotation sequences)
relies on this convention, so a rotation sequence ``r1, r2, ...`` expands to
the product ``r1 * r2 * ...`` of its permutations.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

Letter = tuple[str, int]


class GroundSetMismatch(ValueError):
    pass


class NotInGroup(ValueError):
    pass


# ---------------------------------------------------------------- raw tuples

def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([q[i] for i in p])


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _is_id(p: tuple[int, ...]) -> bool:
    return all(i == j for i, j in enumerate(p))


class Permutation:
    """Bijection on an ordered tuple of point labels."""

    __slots__ = ("points", "images", "_index", "_hash")

    def __init__(self, points: Sequence[str], images: Sequence[int]):
        self.points = tuple(points)
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.points))):
            raise ValueError("images do not form a permutation")
        self._index = None
        self._hash = hash((self.points, self.images))

    # construction
    @classmethod
    def identity(cls, points: Sequence[str]) -> "Permutation":
        return cls(points, range(len(points)))

    @classmethod
    def from_mapping(cls, points: Sequence[str], mapping: Mapping[str, str]) -> "Permutation":
        pts = tuple(points)
        idx = {v: i for i, v in enumerate(pts)}
        return cls(pts, [idx[mapping.get(v, v)] for v in pts])

    @classmethod
    def from_cycles(cls, points: Sequence[str], cycles: Iterable[Sequence[str]]) -> "Permutation":
        """Product of the given cycles, composed left to right."""
        result = cls.identity(points)
        for cyc in cycles:
            mapping = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
            result = result * cls.from_mapping(points, mapping)
        return result

    @classmethod
    def cycle(cls, points: Sequence[str], cyc: Sequence[str]) -> "Permutation":
        return cls.from_cycles(points, [cyc])

    # protocol
    def _idx(self) -> dict[str, int]:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.points)}
        return self._index

    def __call__(self, x: str) -> str:
        return self.points[self.images[self._idx()[x]]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.points == other.points and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation{self.cycle_notation()}"

    def __str__(self) -> str:
        return self.cycle_notation()

    def _check(self, other: "Permutation") -> None:
        if self.points != other.points:
            raise GroundSetMismatch("permutations act on different ground sets")

    def __mul__(self, other: "Permutation") -> "Permutation":
        self._check(other)
        return Permutation(self.points, _mul(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(self.points, _inv(self.images))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.points)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, t: "Permutation") -> "Permutation":
        """``t^-1 * self * t``: maps t(x) to t(self(x))."""
        return t.inverse() * self * t

    # structure
    def is_identity(self) -> bool:
        return _is_id(self.images)

    def support(self) -> list[str]:
        return [self.points[i] for i, j in enumerate(self.images) if i != j]

    @property
    def degree(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i != j)

    def cycles(self) -> list[tuple[str, ...]]:
        """Disjoint cycles, each starting at its smallest label, sorted."""
        seen = set()
        out = []
        for i in range(len(self.points)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            labels = [self.points[k] for k in cyc]
            m = labels.index(min(labels))
            out.append(tuple(labels[m:] + labels[:m]))
        return sorted(out)

    def cycle_type(self) -> list[int]:
        return sorted(len(c) for c in self.cycles())

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(c) + ")" for c in cycles)

    def parity(self) -> str:
        return "even" if sum(len(c) - 1 for c in self.cycles()) % 2 == 0 else "odd"

    def is_even(self) -> bool:
        return self.parity() == "even"

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.cycles() else 1

    def restrict(self, subset: Iterable[str]) -> "Permutation":
        keep = [v for v in self.points if v in set(subset)]
        mapping = {v: self(v) for v in keep}
        if set(mapping.values()) != set(keep):
            raise ValueError("subset is not invariant")
        return Permutation.from_mapping(keep, mapping)


def compose(a: Permutation, b: Permutation) -> Permutation:
    return a * b


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


def power(a: Permutation, k: int) -> Permutation:
    return a ** k


def conjugate(a: Permutation, t: Permutation) -> Permutation:
    return a.conjugate(t)


def parity(a: Permutation) -> str:
    return a.parity()


def cycle_notation(a: Permutation) -> list[tuple[str, ...]]:
    return a.cycles()


# ---------------------------------------------------------------- words

_SUPERSCRIPT = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


@dataclass(frozen=True)
class GenWord:
    """Formal product of named generators with exponents +1/-1."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def gen(cls, name: str, exp: int = 1) -> "GenWord":
        if exp == 0:
            return cls()
        letter = (name, 1 if exp > 0 else -1)
        return cls((letter,) * abs(exp))

    @classmethod
    def parse(cls, text: str) -> "GenWord":
        """Parse ``"beta alpha^-1 beta^2"``-style words."""
        letters: list[Letter] = []
        for tok in text.split():
            name, _, exp = tok.partition("^")
            letters.extend(cls.gen(name, int(exp) if exp else 1).letters)
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.letters + other.letters)

    def __pow__(self, k: int) -> "GenWord":
        base = self if k >= 0 else self.inverse()
        return GenWord(base.letters * abs(k))

    def inverse(self) -> "GenWord":
        return GenWord(tuple((n, -e) for n, e in reversed(self.letters)))

    def conj(self, t: "GenWord") -> "GenWord":
        """Exponent notation ``self^t = t^-1 self t``."""
        return t.inverse() * self * t

    def raised(self, *terms: "GenWord") -> "GenWord":
        """``self^(t1 + t2 + ...) = self^t1 self^t2 ...``; the empty word is epsilon."""
        out = GenWord()
        for t in terms:
            out = out * self.conj(t)
        return out

    def free_reduce(self) -> "GenWord":
        out: list[Letter] = []
        for n, e in self.letters:
            if out and out[-1] == (n, -e):
                out.pop()
            else:
                out.append((n, e))
        return GenWord(tuple(out))

    def expand(self, table: Mapping[str, Permutation], points: Sequence[str] | None = None) -> Permutation:
        if points is None:
            points = next(iter(table.values())).points
        result = Permutation.identity(points)
        inv_cache: dict[str, Permutation] = {}
        for name, e in self.letters:
            g = table[name]
            if e < 0:
                if name not in inv_cache:
                    inv_cache[name] = g.inverse()
                g = inv_cache[name]
            result = result * g
        return result

    def __str__(self) -> str:
        if not self.letters:
            return "ε"
        parts = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            name, e = self.letters[i]
            k = (j - i) * e
            parts.append(name if k == 1 else f"{name}{str(k).translate(_SUPERSCRIPT)}")
            i = j
        return " ".join(parts)


# ---------------------------------------------------------------- orbits

def _raw(gens: Iterable[Permutation]) -> tuple[tuple[str, ...], list[tuple[int, ...]]]:
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    pts = gens[0].points
    for g in gens:
        if g.points != pts:
            raise GroundSetMismatch("generators act on different ground sets")
    return pts, [g.images for g in gens]


def orbits(gens: Sequence[Permutation], points: Iterable[str] | None = None) -> list[tuple[str, ...]]:
    pts, raw = _raw(gens)
    idx = {v: i for i, v in enumerate(pts)}
    todo = [idx[v] for v in points] if points is not None else list(range(len(pts)))
    seen: set[int] = set()
    out = []
    for start in todo:
        if start in seen:
            continue
        orb = [start]
        seen.add(start)
        for x in orb:
            for g in raw:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    orb.append(y)
        out.append(tuple(pts[i] for i in sorted(orb)))
    return out


def is_transitive(gens: Sequence[Permutation], points: Iterable[str] | None = None) -> bool:
    pts = list(points) if points is not None else list(gens[0].points)
    orbs = orbits(gens, pts)
    return len(orbs) == 1 and len(orbs[0]) == len(pts)


def is_2_transitive(gens: Sequence[Permutation], points: Iterable[str] | None = None) -> bool:
    """Single orbit of size n(n-1) on ordered pairs of distinct points."""
    pts, raw = _raw(gens)
    sub = list(points) if points is not None else list(pts)
    n = len(sub)
    if n < 2:
        return True
    if not is_transitive(gens, sub):
        return False
    idx = {v: i for i, v in enumerate(pts)}
    start = (idx[sub[0]], idx[sub[1]])
    seen = {start}
    queue = [start]
    for a, b in queue:
        for g in raw:
            nxt = (g[a], g[b])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == n * (n - 1)


def _minimal_block(raw: list[tuple[int, ...]], points: list[int], a: int, b: int) -> set[int]:
    parent = {p: p for p in points}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b)]
    parent[find(b)] = find(a)
    while queue:
        x, y = queue.pop()
        for g in raw:
            u, v = find(g[x]), find(g[y])
            if u != v:
                parent[v] = u
                queue.append((g[x], g[y]))
    root = find(a)
    return {p for p in points if find(p) == root}


def is_primitive(gens: Sequence[Permutation], points: Iterable[str] | None = None) -> bool:
    pts, raw = _raw(gens)
    sub = list(points) if points is not None else list(pts)
    if not is_transitive(gens, sub):
        raise ValueError("primitivity is only defined for transitive groups")
    idx = {v: i for i, v in enumerate(pts)}
    ids = [idx[v] for v in sub]
    for other in ids[1:]:
        if len(_minimal_block(raw, ids, ids[0], other)) < len(ids):
            return False
    return True


# ---------------------------------------------------------------- stabiliser chains

class _Level:
    __slots__ = ("base", "gens", "words", "trans", "twords", "done", "stab", "n")

    def __init__(self, n: int):
        self.n = n
        self.base: int | None = None
        self.gens: list[tuple[int, ...]] = []
        self.words: list[object] = []
        self.trans: dict[int, tuple[int, ...]] = {}
        self.twords: dict[int, object] = {}
        self.done: set[tuple[int, int]] = set()
        self.stab: _Level | None = None


# word trees: ("g", name, e) leaves, ("*", a, b) products, ("~", a) inverses, None = identity
def _wmul(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return ("*", a, b)


def _winv(a):
    if a is None:
        return None
    return ("~", a)


class StabChain:
    """Deterministic Schreier-Sims stabiliser chain on points 0..n-1.

    With ``track_words`` each transversal element remembers a word over the
    input generators (kept as a product tree until expanded).
    """

    def __init__(self, n: int, gens: Iterable[tuple[int, ...]] = (),
                 names: Sequence[str] | None = None, track_words: bool = False):
        self.n = n
        self.track = track_words
        self.root = _Level(n)
        self.identity = tuple(range(n))
        gens = list(gens)
        for i, g in enumerate(gens):
            w = ("g", names[i], 1) if (track_words and names) else None
            self.add(g, w)

    def sift(self, g: tuple[int, ...], w=None, level: _Level | None = None):
        node = level or self.root
        while node.base is not None:
            x = g[node.base]
            u = node.trans.get(x)
            if u is None:
                return g, w, node
            g = _mul(g, _inv(u))
            if self.track:
                w = _wmul(w, _winv(node.twords[x]))
            node = node.stab
        return g, w, node

    def contains(self, g: tuple[int, ...]) -> bool:
        res, _, _ = self.sift(g)
        return _is_id(res)

    def add(self, g: tuple[int, ...], w=None) -> bool:
        """Add a group element; returns True if the group grew."""
        res, rw, node = self.sift(g, w)
        if _is_id(res):
            return False
        self._extend(self.root, g, w)
        return True

    def _extend(self, node: _Level, g: tuple[int, ...], w) -> None:
        if node.base is None:
            node.base = next(i for i, j in enumerate(g) if i != j)
            node.trans = {node.base: self.identity}
            node.twords = {node.base: None}
            node.stab = _Level(self.n)
        node.gens.append(g)
        node.words.append(w)
        # grow the orbit without touching existing transversal elements
        frontier = list(node.trans)
        while frontier:
            nxt = []
            for x in frontier:
                for gi, s in enumerate(node.gens):
                    y = s[x]
                    if y not in node.trans:
                        node.trans[y] = _mul(node.trans[x], s)
                        if self.track:
                            node.twords[y] = _wmul(node.twords[x], node.words[gi])
                        nxt.append(y)
            frontier = nxt
        changed = True
        while changed:
            changed = False
            for x in list(node.trans):
                for gi in range(len(node.gens)):
                    if (x, gi) in node.done:
                        continue
                    node.done.add((x, gi))
                    s = node.gens[gi]
                    y = s[x]
                    h = _mul(_mul(node.trans[x], s), _inv(node.trans[y]))
                    hw = None
                    if self.track:
                        hw = _wmul(_wmul(node.twords[x], node.words[gi]), _winv(node.twords[y]))
                    res, rw, _ = self.sift(h, hw, node.stab)
                    if not _is_id(res):
                        self._extend(node.stab, res, rw)
                        changed = True

    def order(self) -> int:
        total = 1
        node = self.root
        while node.base is not None:
            total *= len(node.trans)
            node = node.stab
        return total

    def base(self) -> list[int]:
        out = []
        node = self.root
        while node.base is not None:
            out.append(node.base)
            node = node.stab
        return out


def _expand_tree(tree, limit: int) -> list[Letter]:
    out: list[Letter] = []
    stack = [(tree, False)]
    while stack:
        node, inv = stack.pop()
        if node is None:
            continue
        kind = node[0]
        if kind == "g":
            out.append((node[1], -node[2] if inv else node[2]))
            if len(out) > limit:
                raise OverflowError("word expansion exceeds limit")
        elif kind == "~":
            stack.append((node[1], not inv))
        else:
            a, b = node[1], node[2]
            # stack is LIFO: push the part that must come last first
            if inv:
                stack.append((a, True))
                stack.append((b, True))
            else:
                stack.append((b, False))
                stack.append((a, False))
    return out


def group_chain(gens: Mapping[str, Permutation] | Sequence[Permutation]) -> StabChain:
    perms = list(gens.values()) if isinstance(gens, Mapping) else list(gens)
    n = len(perms[0].points)
    return StabChain(n, [p.images for p in perms])


def group_order(gens: Mapping[str, Permutation] | Sequence[Permutation]) -> int:
    return group_chain(gens).order()


def contains(gens: Mapping[str, Permutation] | Sequence[Permutation], target: Permutation) -> bool:
    return group_chain(gens).contains(target.images)


def prune_generators(gens: Mapping[str, Permutation],
                     key: Callable[[str], object] | None = None) -> dict[str, Permutation]:
    """Greedy subset generating the same group (cheapest names first)."""
    names = sorted(gens, key=key) if key else list(gens)
    if not names:
        return {}
    n = len(gens[names[0]].points)
    chain = StabChain(n)
    kept = {}
    for name in names:
        if chain.add(gens[name].images):
            kept[name] = gens[name]
    return kept


# ---------------------------------------------------------------- factorisation

Cost = Callable[[Letter], int]


def _unit(letter: Letter) -> int:
    return 1


def _letters(gens: Mapping[str, Permutation], inverses: bool) -> list[tuple[Letter, tuple[int, ...]]]:
    out = []
    for name, g in gens.items():
        out.append(((name, 1), g.images))
        if inverses:
            inv = _inv(g.images)
            if inv != g.images:
                out.append(((name, -1), inv))
    return out


def _cheapest(start, goal_test, step, letters, cost: Cost, limit: int):
    """Dijkstra over states reached by applying letters; returns the letter path."""
    best = {start: 0}
    parent: dict = {start: None}
    heap = [(0, 0, start)]
    tick = 0
    while heap:
        d, _, state = heapq.heappop(heap)
        if d > best[state]:
            continue
        if goal_test(state):
            path = []
            while parent[state] is not None:
                state, letter = parent[state]
                path.append(letter)
            return GenWord(tuple(reversed(path)))
        for letter, g in letters:
            nxt = step(state, g)
            nd = d + cost(letter)
            if nd < best.get(nxt, nd + 1):
                best[nxt] = nd
                parent[nxt] = (state, letter)
                tick += 1
                heapq.heappush(heap, (nd, tick, nxt))
        if len(best) > limit:
            raise OverflowError("search space exceeds limit")
    return None


def bfs_word(target: Permutation, gens: Mapping[str, Permutation], inverses: bool = True,
             limit: int = 200_000, cost: Cost = _unit) -> GenWord:
    """Cheapest word (unit costs: shortest) by search over the group elements."""
    ident = tuple(range(len(target.points)))
    goal = target.images
    if goal == ident:
        return GenWord()
    word = _cheapest(ident, lambda p: p == goal, _mul, _letters(gens, inverses), cost, limit)
    if word is None:
        raise NotInGroup(f"{target} is not generated")
    return word


def _word_cost(word: GenWord, cost: Cost) -> int:
    return sum(cost(letter) for letter in word)


def _pure_three_cycles(gens: Mapping[str, Permutation], orbit_of: dict[str, int],
                       hints: Sequence[GenWord], seed: int, cost: Cost = _unit) -> dict[int, GenWord]:
    """Find, per orbit, a cheap word whose expansion is a single 3-cycle."""
    found: dict[int, GenWord] = {}
    points = next(iter(gens.values())).points

    def consider(word: GenWord) -> None:
        perm = word.expand(gens, points)
        ctype = perm.cycle_type()
        if ctype.count(3) != 1 or any(c % 3 == 0 for c in ctype if c != 3):
            return
        others = [c for c in ctype if c != 3]
        m = math.lcm(*others) if others else 1
        cyc = perm ** m
        orb = orbit_of[cyc.support()[0]]
        cand = word ** m
        if orb not in found or _word_cost(cand, cost) < _word_cost(found[orb], cost):
            found[orb] = cand

    for w in hints:
        consider(w)
    names = list(gens)
    singles = [GenWord.gen(n) for n in names]
    for w in singles:
        consider(w)
    small = singles[:12]
    for a in small:
        for b in small:
            if a == b:
                continue
            for w in (a * b, a * b.inverse(), a.inverse() * b.inverse() * a * b):
                consider(w)
    sizes: dict[int, int] = {}
    for o in orbit_of.values():
        sizes[o] = sizes.get(o, 0) + 1
    wanted = [o for o, size in sizes.items() if size >= 3]
    rng = random.Random(seed)
    tries = 0
    while tries < 3000 and any(o not in found for o in wanted):
        tries += 1
        k = rng.randint(2, 6)
        consider(GenWord(tuple((rng.choice(names), rng.choice((1, -1))) for _ in range(k))))
    return found


def find_three_cycle(gens: Mapping[str, Permutation], seed: int = 0) -> GenWord | None:
    """Short word over ``gens`` whose expansion is a single 3-cycle."""
    points = next(iter(gens.values())).points
    found = _pure_three_cycles(gens, {v: 0 for v in points}, (), seed)
    return found.get(0)


class _TripleTransports:
    """Cheapest transport words for ordered triples, from one base triple.

    A conjugating word ``t`` is paid for twice (``t^-1 c t``), so each
    letter is weighted by the cost of the letter plus its inverse.
    """

    def __init__(self, gens: Mapping[str, Permutation], base: tuple[str, str, str], cost: Cost):
        points = next(iter(gens.values())).points
        self.idx = {v: i for i, v in enumerate(points)}
        letters = _letters(gens, True)
        start = tuple(self.idx[v] for v in base)
        both = lambda letter: cost(letter) + cost((letter[0], -letter[1]))  # noqa: E731
        self.best = {start: 0}
        self.parent: dict = {start: None}
        heap = [(0, 0, start)]
        tick = 0
        while heap:
            d, _, t = heapq.heappop(heap)
            if d > self.best[t]:
                continue
            for letter, g in letters:
                u = (g[t[0]], g[t[1]], g[t[2]])
                nd = d + both(letter)
                if nd < self.best.get(u, nd + 1):
                    self.best[u] = nd
                    self.parent[u] = (t, letter)
                    tick += 1
                    heapq.heappush(heap, (nd, tick, u))

    def word_to(self, triple: tuple[str, str, str]) -> GenWord | None:
        cur = tuple(self.idx[v] for v in triple)
        if cur not in self.parent:
            return None
        path = []
        while self.parent[cur] is not None:
            cur, letter = self.parent[cur]
            path.append(letter)
        return GenWord(tuple(reversed(path)))


def three_cycle_factorize(target: Permutation, gens: Mapping[str, Permutation],
                          hints: Sequence[GenWord] = (), seed: int = 0,
                          cost: Cost = _unit) -> GenWord | None:
    """Write ``target`` as a parity fix-up times conjugated 3-cycles.

    Works when every orbit of size >= 3 carries a pure 3-cycle and the group
    restricted to it moves that 3-cycle onto any other.  Returns None when
    the route does not apply.
    """
    points = target.points
    orbs = [o for o in orbits(list(gens.values())) if len(o) >= 2]
    orbit_of = {v: i for i, o in enumerate(orbs) for v in o}
    for v in target.support():
        if v not in orbit_of or orbit_of[target(v)] != orbit_of[v]:
            return None
    cycles = _pure_three_cycles(gens, orbit_of, hints, seed, cost)
    for i, o in enumerate(orbs):
        if len(o) >= 3 and i not in cycles:
            return None

    # parity fix-up: cheapest word with the target's parity on every orbit
    def signature(p: Permutation) -> tuple[int, ...]:
        return tuple(0 if p.restrict(o).is_even() else 1 for o in orbs)

    sig_letters = [((n, 1), signature(g)) for n, g in gens.items()]
    want = signature(target)
    w0 = _cheapest(tuple(0 for _ in orbs), lambda s: s == want,
                   lambda s, gs: tuple(a ^ b for a, b in zip(s, gs)), sig_letters, cost, 1 << 20)
    if w0 is None:
        return None
    rest = w0.expand(gens, points).inverse() * target

    word = w0
    for oi, o in enumerate(orbs):
        if len(o) < 3:
            continue
        r = rest.restrict(o)
        if r.is_identity():
            continue
        c0w = cycles[oi]
        base = c0w.expand(gens, points).cycles()[0]
        transports = _TripleTransports(gens, base, cost)
        pieces: list[GenWord] = []
        while not r.is_identity():
            moved = r.support()
            x = moved[0]
            y = r(x)
            z = next(v for v in moved if v not in (x, y))
            options = []
            for triple in ((x, y, z), (y, z, x), (z, x, y)):
                t = transports.word_to(triple)
                if t is not None:
                    options.append(c0w.conj(t))
            for triple in ((x, z, y), (z, y, x), (y, x, z)):
                t = transports.word_to(triple)
                if t is not None:
                    options.append(c0w.conj(t).inverse())
            if not options:
                return None
            pieces.append(min(options, key=lambda w: _word_cost(w, cost)))
            r = r * Permutation.cycle(o, (x, y, z)).inverse()
        for piece in reversed(pieces):
            word = word * piece
    word = word.free_reduce()
    if word.expand(gens, points) != target:
        return None
    return word


def chain_factorize(target: Permutation, gens: Mapping[str, Permutation],
                    limit: int = 5_000_000) -> GenWord:
    """Sift ``target`` through a word-tracking stabiliser chain."""
    names = list(gens)
    n = len(target.points)
    chain = StabChain(n, [gens[k].images for k in names], names=names, track_words=True)
    res, w, node = chain.sift(target.images, None)
    if not _is_id(res):
        raise NotInGroup(f"{target} is not generated")
    # sifting gives target * u1^-1 * u2^-1 ... = id, so target = ... u2 u1
    letters = _expand_tree(_winv(w), limit)
    word = GenWord(tuple(letters)).free_reduce()
    if word.expand(gens, target.points) != target:
        raise AssertionError("stabiliser-chain word does not expand to its target")
    return word


def factorize(target: Permutation, gens: Mapping[str, Permutation], *,
              hints: Sequence[GenWord] = (), inverses: bool = True,
              bfs_limit: int = 50_000, seed: int = 0, cost: Cost = _unit) -> GenWord:
    """Word over ``gens`` whose expansion equals ``target``.

    Groups of order at most ``bfs_limit`` get a cheapest word by exhaustive
    search; larger ones go through conjugated 3-cycles when possible, else
    through a stabiliser chain.  ``cost`` prices each letter (default 1).
    """
    if target.is_identity():
        return GenWord()
    if not gens:
        raise NotInGroup("no generators")
    chain = group_chain(gens)
    if not chain.contains(target.images):
        raise NotInGroup(f"{target} is not generated")
    if chain.order() <= bfs_limit:
        return bfs_word(target, gens, inverses=inverses, limit=2 * bfs_limit, cost=cost)
    word = three_cycle_factorize(target, gens, hints=hints, seed=seed, cost=cost)
    if word is not None:
        return word
    return chain_factorize(target, gens)
