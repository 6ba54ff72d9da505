import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from eulerchi.permcore import Permutation, PermutationGroup, prime_divisors
from eulerchi.subgroups import (
    GroupPair,
    abelian_rank,
    enumerate_abelian_subgroups,
    enumerate_p_subgroups,
    enumerate_pi_subgroups,
    filter_elementary_abelian,
    filter_radical,
)

from conftest import named
from oracles import all_subgroups, closure, compose, is_p_group_order


def _oracle_subgroups(G):
    elements = [tuple(int(v) for v in row) for row in G.elements_array]
    return all_subgroups(elements, G.degree)


def _two_generated(H, degree):
    return any(closure([a, b], degree) == H for a, b in itertools.combinations_with_replacement(sorted(H), 2))


def _is_abelian(H):
    return all(compose(a, b) == compose(b, a) for a, b in itertools.combinations(H, 2))


@pytest.mark.parametrize("name", ["S4", "A5", "GL(3,2)", "C12", "A4"])
def test_all_subgroups_match_oracle(name):
    G = named(name)
    oracle = _oracle_subgroups(G)
    F = enumerate_pi_subgroups(G.whole(), prime_divisors(G.order))
    assert F.size == len(oracle)
    assert Counter(m.order for m in F.members) == Counter(len(H) for H in oracle)


@pytest.mark.parametrize("name,p", [("S4", 2), ("S4", 3), ("GL(3,2)", 2), ("GL(3,2)", 7), ("A5", 2)])
def test_p_subgroups_match_oracle(name, p):
    G = named(name)
    oracle = [H for H in _oracle_subgroups(G) if is_p_group_order(len(H), p)]
    F = enumerate_p_subgroups(G.whole(), p)
    assert Counter(m.order for m in F.members) == Counter(len(H) for H in oracle)
    assert sum(F.class_lengths) == F.size


def test_radical_2_subgroups_gl32():
    F = filter_radical(enumerate_p_subgroups(named("GL(3,2)").whole(), 2))
    assert sorted(F.class_orders) == [1, 4, 4, 8]
    assert sorted(F.class_lengths) == [1, 7, 7, 21]


def test_abelian_p_regular_m11():
    G = named("M11").whole()
    F = enumerate_abelian_subgroups(G, 2, p_regular_for=2)
    assert sorted(F.class_orders) == [1, 3, 5, 9, 11]


def test_elementary_abelian_filter_and_rank():
    F = filter_elementary_abelian(enumerate_p_subgroups(named("S4").whole(), 2))
    assert sorted(F.class_orders) == [1, 2, 2, 4, 4]
    assert max(abelian_rank(F.representative(c)) for c in range(F.class_count)) == 2


def test_group_pair_validation():
    with pytest.raises(ValueError):
        GroupPair.from_generators(4, [Permutation.from_cycles("(1,2)", 4)], [Permutation.from_cycles("(2,3)", 4)])
    pair = GroupPair.from_generators(4, [Permutation.from_cycles("(1,2)(3,4)", 4)], [Permutation.from_cycles("(1,3)(2,4)", 4)])
    assert pair.A.order == 2 and pair.G.order == 2


def test_class_table_successors():
    F = enumerate_p_subgroups(named("S4").whole(), 2)
    T = F.class_table("successors")
    triv = F.class_orders.index(1)
    # the trivial subgroup lies below every member: row = class lengths
    assert list(T[triv]) == F.class_lengths


perm_lists = st.integers(min_value=3, max_value=6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.permutations(list(range(n))), min_size=1, max_size=2)))


@settings(max_examples=100, deadline=None)
@given(perm_lists, st.sampled_from([2, 3, 5]))
def test_random_groups_subgroup_enumeration_oracle(data, p):
    """Exhaustive oracle on random permutation groups of order <= 200."""
    n, gens = data
    G = PermutationGroup(n, [Permutation(g) for g in gens])
    if G.order > 200:
        return
    oracle = _oracle_subgroups(G)
    F = enumerate_pi_subgroups(G.whole(), prime_divisors(G.order)) if G.order > 1 else None
    if F is not None:
        assert Counter(m.order for m in F.members) == Counter(len(H) for H in oracle)
    Fp = enumerate_p_subgroups(G.whole(), p)
    assert Counter(m.order for m in Fp.members) == Counter(len(H) for H in oracle if is_p_group_order(len(H), p))
    Fa = enumerate_abelian_subgroups(G.whole(), 2)
    two_generated = [H for H in oracle if _is_abelian(H) and _two_generated(H, n)]
    assert Counter(m.order for m in Fa.members) == Counter(len(H) for H in two_generated)
