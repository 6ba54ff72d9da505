from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eulerchi.equivariant import (
    artin_decomposition,
    brown_equivariant_poset,
    chi_r_for_subgroup,
    classes_of,
    commuting_tuple_count,
    conjugation_character,
    cyclic_subgroup_classes,
    euler_class_function,
    inner_product_with_conjugation_character,
    phi_r,
    phi_r_bruteforce,
)
from eulerchi.permcore import Permutation, PermutationGroup, prime_divisors
from eulerchi.subgroups import enumerate_p_subgroups, enumerate_pi_subgroups

from conftest import named
from oracles import closure, commuting_tuples, generating_tuples


def abelian_group(factors):
    """Direct product of cyclic groups acting on disjoint blocks of points."""
    degree = sum(factors)
    gens = []
    start = 0
    for n in factors:
        imgs = list(range(degree))
        for i in range(n):
            imgs[start + i] = start + (i + 1) % n
        gens.append(Permutation(imgs))
        start += n
    return PermutationGroup(degree, gens)


def test_phi_examples():
    assert phi_r(abelian_group([2, 2]).whole(), 2) == 6
    assert phi_r(abelian_group([3, 3]).whole(), 2) == 48
    assert phi_r(abelian_group([5]).whole(), 2) == 24
    assert phi_r(abelian_group([11]).whole(), 2) == 120
    assert phi_r(abelian_group([2, 2, 2]).whole(), 2) == 0
    assert phi_r(named("S3").whole(), 2) == 0


def test_commuting_pairs_is_class_number_times_order():
    G = named("GL(3,2)").whole()
    assert commuting_tuple_count(G, 2) == 6 * 168


@settings(max_examples=120, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, 4, 5, 6]), min_size=1, max_size=3), st.integers(0, 3))
def test_phi_r_bruteforce_oracle(factors, r):
    G = abelian_group(factors)
    if G.order > 24:
        return
    elements = frozenset(tuple(int(v) for v in row) for row in G.elements_array)
    expected = generating_tuples(elements, r, G.degree) if r > 0 else int(G.order == 1)
    assert phi_r(G.whole(), r) == expected
    assert phi_r_bruteforce(G.whole(), r) == expected if r > 0 else True
    assert commuting_tuple_count(G.whole(), r) == G.order ** r


group_names = st.sampled_from(["S3", "S4", "A4", "D", "C6", "A5"])


def _group(name):
    if name == "D":
        return PermutationGroup(4, [Permutation.from_cycles("(1,2,3,4)", 4), Permutation.from_cycles("(1,3)", 4)])
    return named(name)


@settings(max_examples=100, deadline=None)
@given(group_names, st.integers(0, 3))
def test_commuting_tuples_oracle(name, r):
    G = _group(name)
    if G.order ** r > 60 ** 2:
        r = 2
    elements = [tuple(int(v) for v in row) for row in G.elements_array]
    assert commuting_tuple_count(G.whole(), r) == commuting_tuples(elements, r)


GL32_MINUS_CHI3 = {2: 12, 3: 24, 7: 7}
M11_MINUS_CHI3 = {2: 29, 3: 19, 5: 62, 11: 35}


@pytest.mark.parametrize("p", [2, 3, 7])
def test_gl32_chi3(p):
    G = named("GL(3,2)").whole()
    S = brown_equivariant_poset(G, p)
    assert -S.reduced_chi_r(G, 3) == GL32_MINUS_CHI3[p]


def test_chi1_webb_vanishing():
    for name, ps in [("GL(3,2)", (2, 3, 7)), ("S5", (2, 3, 5))]:
        G = named(name).whole()
        for p in ps:
            assert brown_equivariant_poset(G, p).reduced_chi_r(G, 1) == 0


def test_chi0_is_chi_over_order():
    G = named("A5").whole()
    S = brown_equivariant_poset(G, 2, full=True)
    assert S.chi_r(G, 0) == Fraction(S.chi(), 60)


# the subgroup tables: -chi~_r(S_G^{2+*}, K) for r = 1, 2, 3, keyed by |K| (sorted columns)
A5_TABLE = {
    1: (-4, -4, -4), 2: (-2, -2, -2), 3: (-2, -4, -10), 5: (0, 4, 24), 4: (-1, -1, -1),
    6: (-1, -2, -5), 10: (0, 2, 12), 12: (-1, -3, -9), 60: (0, 1, 8),
}
GL32_TABLE = [  # (|K|, r=1, r=2, r=3), two classes each for orders 4 (three), 12, 24
    (1, 8, 8, 8), (2, 4, 4, 4), (3, 2, 0, -6), (7, 2, 8, 50), (4, 2, 2, 2), (4, 2, 2, 2), (4, 2, 2, 2),
    (6, 1, 0, -3), (21, 0, 0, 8), (8, 1, 1, 1), (12, 0, -2, -8), (12, 0, -2, -8), (24, 0, -1, -4),
    (24, 0, -1, -4), (168, 0, 1, 12),
]


def _subgroup_table(name):
    G = named(name).whole()
    S = brown_equivariant_poset(G, 2)
    F = enumerate_pi_subgroups(G, prime_divisors(G.order))
    rows = []
    for c in range(F.class_count):
        K = F.representative(c)
        rows.append((K.order,) + tuple(-chi_r_for_subgroup(S, G, K, 2, r) for r in (1, 2, 3)))
    return S, G, F, rows


def test_a5_subgroup_table():
    S, G, F, rows = _subgroup_table("A5")
    assert {row[0]: row[1:] for row in rows} == A5_TABLE


def test_gl32_subgroup_table():
    S, G, F, rows = _subgroup_table("GL(3,2)")
    assert sorted(rows) == sorted(GL32_TABLE)
    # K = G agrees with the equivariant characteristic; K = 1 gives the plain chi~
    for r in (1, 2, 3):
        assert chi_r_for_subgroup(S, G, G, 2, r) == S.reduced_chi_r(G, r)
    assert chi_r_for_subgroup(S, G, F.representative(F.class_orders.index(1)), 2, 2) == S.chi() - 1


M11_ALPHA2 = {
    2: (0, 0, 1, 0, -1, 0, 0, 0, -1, -1),
    3: (0, 1, 0, 1, -1, 0, 0, 0, -1, -1),
    5: (0, 0, -1, 1, 0, -1, -1, -1, -1, -1),
    11: (0, -1, -1, -1, 3, -1, -1, -1, 0, 0),
}
M11_ARTIN = {
    2: (320, 0, 1, 0, -1, 0, 0, -1),
    3: (375, -2, 0, 1, -1, 0, 0, -1),
    5: (-296, 1, 2, 2, 0, -1, -1, -1),
    11: (-1463, 6, 2, 0, 3, -1, -1, 0),
}


@pytest.mark.parametrize("p", [2, 3, 5, 11])
def test_m11_class_function_and_artin(p):
    G = named("M11").whole()
    S = brown_equivariant_poset(G, p)
    f = euler_class_function(S, G, 2, reduced=True)
    assert f.class_orders == (1, 2, 3, 4, 5, 6, 8, 8, 11, 11)
    assert f.values == M11_ALPHA2[p]
    dec = artin_decomposition(f, p, degree_identity=True)
    assert dec.orders == (1, 2, 3, 4, 5, 6, 8, 11)
    assert dec.coefficients == M11_ARTIN[p]
    assert dec.weights == (0, 1, 1, 4, 1, 8, 6, 2)
    assert dec.normalizer_indices == (7920, 24, 12, 4, 4, 2, 2, 5)
    assert dec.weighted_sum == sum(M11_ALPHA2[p])


def test_conjugation_character_inner_product():
    G = named("S4").whole()
    chi = conjugation_character(G)
    assert inner_product_with_conjugation_character(chi) == sum(classes_of(G).centralizer_orders)
    # <|C_G|, 1> = number of classes
    one = type(chi)(chi.group, chi.classes, tuple(Fraction(1) for _ in chi.values))
    assert chi.inner(one) == classes_of(G).count


def test_cyclic_classes_gl32():
    assert [c.order for c in cyclic_subgroup_classes(named("GL(3,2)").whole())] == [1, 2, 3, 4, 7]


CATALOG = [("S3", 2), ("S3", 3), ("S4", 2), ("S4", 3), ("A4", 2), ("A5", 2), ("A5", 3), ("A5", 5),
           ("S5", 2), ("S5", 3), ("GL(3,2)", 2), ("GL(3,2)", 3), ("GL(3,2)", 7), ("A6", 3), ("C6", 2), ("D", 2)]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(CATALOG), st.integers(1, 3))
def test_chi_r_integrality_and_alpha_vanishing(case, r):
    name, p = case
    G = _group(name).whole()
    S = brown_equivariant_poset(G, p)
    value = S.chi_r(G, r)  # both paths, checked internally
    assert value.denominator == 1
    if r >= 2:
        f = euler_class_function(S, G, r, reduced=True)
        assert all(v.denominator == 1 for v in f.values)
        for v, o in zip(f.values, f.class_orders):
            if o % p == 0:
                assert v == 0
        assert inner_product_with_conjugation_character(f) == S.reduced_chi_r(G, r)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_a_invariance_of_weights(case, data):
    """Weights of the Brown poset are constant on conjugacy classes of members."""
    name, p = case
    G = _group(name).whole()
    F = enumerate_p_subgroups(G, p).without_trivial()
    P = F.poset()
    w = P.weighting_values()
    mu = P.moebius_matrix()
    g = data.draw(st.integers(0, G.order - 1))
    perm = F.conjugation_map(int(G.idx[g]))
    assert all(w[i] == w[perm[i]] for i in range(F.size))
    i = data.draw(st.integers(0, F.size - 1))
    j = data.draw(st.integers(0, F.size - 1))
    assert mu[i, j] == mu[perm[i], perm[j]]


def _centralizer_size(elements, x):
    from oracles import compose
    return sum(1 for g in elements if compose(g, x) == compose(x, g))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG), st.data())
def test_centralizer_sum_divisibility(case, data):
    """|N_G(H)| divides sum_{x in H-1} |C_G(x)| for random subgroups H; for cyclic H this
    is the Artin weight reported by the engine."""
    from oracles import compose, inverse
    name, p = case
    G = _group(name)
    n = G.degree
    elements = sorted(tuple(int(v) for v in row) for row in G.elements_array)
    gens = data.draw(st.lists(st.sampled_from(elements), min_size=1, max_size=2))
    H = closure(gens, n)
    N = [g for g in elements if all(compose(compose(inverse(g), h), g) in H for h in H)]
    s = sum(_centralizer_size(elements, x) for x in H if x != tuple(range(n)))
    assert s % len(N) == 0
    if len(gens) == 1:
        S = brown_equivariant_poset(G.whole(), p)
        dec = artin_decomposition(euler_class_function(S, G.whole(), 2, reduced=True), p)
        same_order = [w for c, w in zip(dec.cyclic_classes, dec.weights) if c.order == len(H)]
        assert s // len(N) in same_order
