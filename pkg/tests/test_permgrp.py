"""Permutation group layer: BSGS orders, membership, set orbits, backtracks.

Brute-force oracles enumerate group closures directly, so every structural
claim (order, stabilizer, transporter) is checked against an independent
computation on small groups.
"""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polyorbit.permgrp import (
    OrbitBudgetExceeded,
    Permutation,
    PermutationGroup,
    canonical_representative,
    is_equivalent,
    orbit_of_set,
    schreier_sims,
    set_stabilizer,
)


def brute_closure(gens, degree):
    """All elements of <gens> by breadth-first multiplication."""
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                prod = g * h
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def symmetric_gens(n):
    return [Permutation.from_cycles(n, [(1, 2)]),
            Permutation.from_cycles(n, [tuple(range(1, n + 1))])]


# -- Permutation basics ------------------------------------------------------

def test_identity_and_call():
    e = Permutation.identity(5)
    assert e.is_identity()
    assert [e(i) for i in range(1, 6)] == [1, 2, 3, 4, 5]


def test_from_cycles():
    p = Permutation.from_cycles(5, [(1, 2, 3)])
    assert p(1) == 2 and p(2) == 3 and p(3) == 1 and p(4) == 4


def test_composition_order():
    # (p * q)(x) = p(q(x))
    p = Permutation.from_cycles(3, [(1, 2)])
    q = Permutation.from_cycles(3, [(2, 3)])
    assert (p * q)(3) == p(q(3)) == p(2) == 1
    assert (q * p)(3) == q(p(3)) == q(3) == 2


def test_inverse():
    p = Permutation.from_cycles(6, [(1, 4, 2), (3, 6)])
    assert (p * p.inverse()).is_identity()
    assert (p.inverse() * p).is_identity()


def test_cycle_string_roundtrip():
    p = Permutation.from_cycles(7, [(1, 3, 5), (2, 7)])
    assert Permutation.parse_cycles(7, p.cycle_string()) == p
    assert Permutation.parse_cycles(4, "()").is_identity()
    assert Permutation.parse_cycles(4, "(1 2)(3 4)") == Permutation((2, 1, 4, 3))


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        Permutation((1, 1, 3))


def test_apply_set():
    p = Permutation.from_cycles(4, [(1, 2, 3, 4)])
    assert p.apply_set({1, 2}) == frozenset({2, 3})


# -- BSGS construction -------------------------------------------------------

def test_symmetric_group_order():
    for n in range(2, 7):
        G = schreier_sims(symmetric_gens(n))
        assert G.order() == len(brute_closure(symmetric_gens(n), n))


def test_trivial_group():
    G = PermutationGroup([], degree=4)
    assert G.order() == 1
    assert list(G.elements()) == [Permutation.identity(4)]
    assert Permutation.identity(4) in G
    assert Permutation.from_cycles(4, [(1, 2)]) not in G


def test_klein_four():
    gens = [Permutation.from_cycles(4, [(1, 2), (3, 4)]),
            Permutation.from_cycles(4, [(1, 3), (2, 4)])]
    G = schreier_sims(gens)
    assert G.order() == 4


def test_membership_matches_closure():
    gens = [Permutation.from_cycles(5, [(1, 2, 3)]),
            Permutation.from_cycles(5, [(3, 4, 5)])]
    G = schreier_sims(gens)   # A5
    closure = brute_closure(gens, 5)
    assert G.order() == 60 == len(closure)
    for images in itertools.permutations(range(1, 6)):
        p = Permutation(images)
        assert (p in G) == (p in closure)


def test_elements_enumeration():
    gens = symmetric_gens(4)
    G = schreier_sims(gens)
    elems = list(G.elements())
    assert len(elems) == 24
    assert len(set(elems)) == 24
    assert set(elems) == brute_closure(gens, 4)


def test_elements_budget():
    G = schreier_sims(symmetric_gens(7))
    with pytest.raises(OrbitBudgetExceeded):
        list(G.elements(budget=100))


def test_base_prefix_preserves_group():
    gens = symmetric_gens(5)
    G = schreier_sims(gens)
    H = G.rebase([4, 2, 5])
    assert H.base[:3] == (4, 2, 5)
    assert H.order() == G.order() == 120
    for g in gens:
        assert g in H


def test_deterministic_chain():
    gens = [Permutation.from_cycles(6, [(1, 2, 3, 4, 5, 6)]),
            Permutation.from_cycles(6, [(2, 6), (3, 5)])]
    G1 = schreier_sims(gens)
    G2 = schreier_sims(gens)
    assert G1.base == G2.base
    assert list(G1.elements()) == list(G2.elements())


# -- point orbits and stabilizers --------------------------------------------

def test_point_orbits():
    g = Permutation.from_cycles(6, [(1, 2, 3)])
    h = Permutation.from_cycles(6, [(5, 6)])
    G = schreier_sims([g, h])
    assert sorted(sorted(o) for o in G.point_orbits()) == [[1, 2, 3], [4], [5, 6]]


def test_pointwise_stabilizer_s4():
    G = schreier_sims(symmetric_gens(4))
    S1 = G.pointwise_stabilizer([1])
    assert S1.order() == 6
    S12 = G.pointwise_stabilizer([1, 2])
    assert S12.order() == 2
    oracle = {p for p in brute_closure(symmetric_gens(4), 4) if p(1) == 1 and p(2) == 2}
    assert set(S12.elements()) == oracle


def test_pointwise_stabilizer_of_fixed_point():
    g = Permutation.from_cycles(5, [(1, 2, 3)])
    G = schreier_sims([g])
    assert G.pointwise_stabilizer([5]).order() == 3   # 5 is already fixed


# -- set orbits ---------------------------------------------------------------

def test_orbit_of_set_s4():
    G = schreier_sims(symmetric_gens(4))
    orb = orbit_of_set(G, {2, 3})
    assert orb.expanded
    assert orb.size == 6
    assert orb.representative == (1, 2)
    assert frozenset({1, 4}) in orb.elements


def test_orbit_of_set_budget_fallback():
    G = schreier_sims(symmetric_gens(8))
    # 4-subsets of an 8-set: orbit size C(8,4) = 70 > budget 10
    orb = orbit_of_set(G, {2, 4, 6, 8}, budget=10)
    assert not orb.expanded
    assert orb.representative == (2, 4, 6, 8)
    assert orb.size == 70


def test_canonical_representative():
    G = schreier_sims(symmetric_gens(5))
    assert canonical_representative(G, {3, 5}) == (1, 2)
    assert canonical_representative(G, {1, 2}) == (1, 2)
    H = PermutationGroup([], degree=5)
    assert canonical_representative(H, {3, 5}) == (3, 5)


def test_set_stabilizer_s4():
    gens = symmetric_gens(4)
    G = schreier_sims(gens)
    stab = set_stabilizer(G, {1, 2})
    oracle = {p for p in brute_closure(gens, 4) if p.apply_set({1, 2}) == frozenset({1, 2})}
    assert stab.order() == len(oracle) == 4
    assert set(stab.elements()) == oracle


def test_set_stabilizer_orbit_product():
    gens = [Permutation.from_cycles(6, [(1, 2, 3, 4, 5, 6)]),
            Permutation.from_cycles(6, [(2, 6), (3, 5)])]   # dihedral, order 12
    G = schreier_sims(gens)
    for S in [{1}, {1, 2}, {1, 4}, {1, 3, 5}, {2, 3, 5, 6}]:
        orb = orbit_of_set(G, S)
        stab = set_stabilizer(G, S)
        assert orb.size * stab.order() == G.order()


# -- transporter search -------------------------------------------------------

def test_is_equivalent_s4():
    G = schreier_sims(symmetric_gens(4))
    w = is_equivalent(G, {1, 2}, {3, 4})
    assert w is not None and w.apply_set({1, 2}) == frozenset({3, 4})
    assert w in G


def test_is_equivalent_negative():
    # <(1 2)(3 4)> cannot map {1} to {3}
    G = schreier_sims([Permutation.from_cycles(4, [(1, 2), (3, 4)])])
    assert is_equivalent(G, {1}, {3}) is None
    assert is_equivalent(G, {1}, {2}) is not None


def test_is_equivalent_size_mismatch_and_identity():
    G = schreier_sims(symmetric_gens(4))
    assert is_equivalent(G, {1, 2}, {1, 2, 3}) is None
    assert is_equivalent(G, {2, 3}, {2, 3}).is_identity()


def test_is_equivalent_matches_brute_force():
    gens = [Permutation.from_cycles(6, [(1, 2, 3, 4, 5, 6)]),
            Permutation.from_cycles(6, [(2, 6), (3, 5)])]
    G = schreier_sims(gens)
    closure = brute_closure(gens, 6)
    subsets = [frozenset(c) for k in (1, 2, 3) for c in itertools.combinations(range(1, 7), k)]
    for S in subsets:
        for T in subsets:
            w = is_equivalent(G, S, T)
            exists = any(p.apply_set(S) == T for p in closure)
            assert (w is not None) == exists
            if w is not None:
                assert w in G
                assert w.apply_set(S) == T


# -- randomized structural invariants ------------------------------------------

@st.composite
def random_gens(draw):
    degree = draw(st.integers(min_value=2, max_value=6))
    k = draw(st.integers(min_value=1, max_value=3))
    gens = []
    for _ in range(k):
        images = draw(st.permutations(list(range(1, degree + 1))))
        gens.append(Permutation(images))
    return degree, gens


@settings(max_examples=40, deadline=None)
@given(random_gens())
def test_order_matches_brute_closure(dg):
    degree, gens = dg
    G = PermutationGroup(gens, degree=degree)
    closure = brute_closure(gens, degree)
    assert G.order() == len(closure)
    for p in closure:
        assert p in G


@settings(max_examples=25, deadline=None)
@given(random_gens(), st.data())
def test_orbit_stabilizer_random(dg, data):
    degree, gens = dg
    G = PermutationGroup(gens, degree=degree)
    S = frozenset(data.draw(st.sets(st.integers(min_value=1, max_value=degree),
                                    min_size=1, max_size=degree)))
    orb = orbit_of_set(G, S)
    stab = set_stabilizer(G, S)
    assert orb.size * stab.order() == G.order()
    assert frozenset(orb.representative) in orb.elements
    for el in stab.elements():
        assert el.apply_set(S) == S
