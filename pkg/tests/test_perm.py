import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from dimapf.perm import (GenWord, GroundSetMismatch, NotInGroup, Permutation, StabChain, bfs_word,
                         chain_factorize, factorize, find_three_cycle, group_order, is_2_transitive,
                         is_primitive, is_transitive, orbits, prune_generators,
                         three_cycle_factorize)

PTS = tuple("abcdefg")


def closure(gens):
    """Group generated by ``gens``, by plain breadth-first closure."""
    pts = gens[0].points
    seen = {Permutation.identity(pts)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for q in gens:
                r = p * q
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


perms = st.permutations(range(len(PTS))).map(lambda im: Permutation(PTS, tuple(im)))


def test_composition_is_left_to_right():
    p = Permutation.from_cycles("0123", [("0", "1", "2")])
    q = Permutation.from_cycles("0123", [("1", "3")])
    r = p * q
    assert r("0") == q(p("0")) == "3"
    assert str(r) == "(0 3 1 2)"
    assert r.parity() == "odd"


def test_identity_notation_and_ground_set_check():
    assert str(Permutation.identity("abc")) == "()"
    with pytest.raises(GroundSetMismatch):
        Permutation.identity("abc") * Permutation.identity("abd")


@given(perms, perms, perms)
def test_group_axioms(p, q, r):
    e = Permutation.identity(PTS)
    assert (p * q) * r == p * (q * r)
    assert p * e == e * p == p
    assert p * p.inverse() == e


@given(perms, st.integers(-20, 20))
def test_power_matches_repeated_product(p, k):
    expected = Permutation.identity(PTS)
    for _ in range(abs(k)):
        expected = expected * (p if k > 0 else p.inverse())
    assert p ** k == expected
    assert p ** p.order() == Permutation.identity(PTS)


@given(perms, perms)
def test_conjugation_relabels_cycles(p, t):
    c = p.conjugate(t)
    assert c.cycle_type() == p.cycle_type()
    for x in PTS:
        assert c(t(x)) == t(p(x))


@given(perms, perms)
def test_parity_is_a_homomorphism(p, q):
    assert (p * q).is_even() == (p.is_even() == q.is_even())


@given(perms)
def test_cycles_roundtrip(p):
    assert Permutation.from_cycles(PTS, p.cycles()) == p
    assert sum(p.cycle_type()) == len(p.support())


def test_genword_notation_and_algebra():
    w = GenWord.parse("β α^-1 β^-2")
    assert str(w) == "β α⁻¹ β⁻²"
    assert str(GenWord()) == "ε"
    assert (w * w.inverse()).free_reduce() == GenWord()
    a, b = GenWord.gen("α"), GenWord.gen("β")
    assert a.conj(b) == b.inverse() * a * b
    assert a.raised(GenWord(), b) == a * a.conj(b)


def test_genword_expand_uses_table():
    pts = tuple("0123")
    table = {"x": Permutation.cycle(pts, "012"), "y": Permutation.cycle(pts, "23")}
    w = GenWord.parse("x y^-1 x^2")
    assert w.expand(table) == table["x"] * table["y"].inverse() * table["x"] ** 2


def test_orbits_and_transitivity():
    pts = tuple("012345")
    g = [Permutation.cycle(pts, "012"), Permutation.cycle(pts, "34")]
    assert orbits(g) == [("0", "1", "2"), ("3", "4"), ("5",)]
    assert not is_transitive(g)
    s5 = [Permutation.cycle(pts[:5], "01234"), Permutation.cycle(pts[:5], "01")]
    assert is_transitive(s5) and is_2_transitive(s5) and is_primitive(s5)
    c4 = [Permutation.cycle(pts[:4], "0123")]
    assert not is_2_transitive(c4) and not is_primitive(c4)
    with pytest.raises(ValueError):
        is_primitive(g)


@settings(max_examples=40, deadline=None)
@given(st.lists(perms, min_size=1, max_size=3))
def test_chain_order_matches_closure(gens):
    group = closure(gens)
    assert group_order(gens) == len(group)
    chain = StabChain(len(PTS), [g.images for g in gens])
    sample = list(itertools.islice(itertools.permutations(range(len(PTS))), 0, 5040, 97))
    for im in sample:
        assert chain.contains(im) == (Permutation(PTS, im) in group)


@pytest.mark.parametrize("n", [3, 5, 8, 10])
def test_standard_group_orders(n):
    pts = tuple(str(i) for i in range(n))
    assert group_order([Permutation.cycle(pts, pts), Permutation.cycle(pts, pts[:2])]) == math.factorial(n)
    assert group_order([Permutation.cycle(pts, pts[:3]), Permutation.cycle(pts, pts[1:4] if n > 3 else pts[:3]),
                        *(Permutation.cycle(pts, pts[i:i + 3]) for i in range(n - 2))]) == math.factorial(n) // 2
    assert group_order([Permutation.cycle(pts, pts)]) == n


def _s(n):
    pts = tuple(f"p{i}" for i in range(n))
    return pts, {"ρ": Permutation.cycle(pts, pts), "τ": Permutation.cycle(pts, pts[:3])}


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(5, 9))
def test_factorize_routes_reproduce_target(rnd, n):
    pts, gens = _s(n)
    images = list(range(n))
    rnd.shuffle(images)
    target = Permutation(pts, tuple(images))
    if n % 2 == 1 and not target.is_even():
        # both generators are even here, so the group is A_n
        target = target * Permutation.cycle(pts, pts[:2])
    for word in (factorize(target, gens), factorize(target, gens, bfs_limit=0), chain_factorize(target, gens)):
        assert word.expand(gens) == target


def test_bfs_word_is_shortest():
    pts = tuple("0123")
    gens = {"a": Permutation.cycle(pts, "0123"), "b": Permutation.cycle(pts, "01")}
    target = Permutation.cycle(pts, "01") * Permutation.cycle(pts, "0123") ** 2
    word = bfs_word(target, gens)
    assert word.expand(gens) == target
    # exhaustive check that no shorter word exists
    letters = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
    for k in range(len(word)):
        for combo in itertools.product(letters, repeat=k):
            assert GenWord(combo).expand(gens, pts) != target


def test_three_cycle_search_and_factorize():
    pts, gens = _s(7)
    word = find_three_cycle(gens)
    assert word.expand(gens).cycle_type() == [3]
    target = Permutation.cycle(pts, ("p0", "p4", "p2"))
    assert three_cycle_factorize(target, gens).expand(gens) == target


def test_factorize_rejects_outsiders():
    pts = tuple("0123")
    gens = {"a": Permutation.cycle(pts, "0123")}
    with pytest.raises(NotInGroup):
        factorize(Permutation.cycle(pts, "01"), gens)


def test_prune_generators_keeps_group():
    pts, gens = _s(6)
    gens = dict(gens, extra=gens["ρ"] * gens["τ"], dup=gens["ρ"] ** 2)
    kept = prune_generators(gens, key=lambda n: n)
    assert group_order(kept) == group_order(gens)
    assert len(kept) < len(gens)
