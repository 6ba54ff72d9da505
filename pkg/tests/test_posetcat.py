from fractions import Fraction
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eulerchi.posetcat import (
    CategorySkeleton,
    FinitePoset,
    GroupActionOnPoset,
    format_fraction,
    orbit_poset,
    quotient_delta_euler,
    solve_exact,
    subdivision_orbit_euler,
)

from oracles import gauss_solve, poset_euler


def divisor_poset(n):
    labels = [d for d in range(1, n + 1) if n % d == 0]
    return FinitePoset.from_relation(labels, lambda a, b: b % a == 0)


def boolean_poset(k):
    labels = [frozenset(s) for r in range(k + 1) for s in itertools.combinations(range(k), r)]
    return FinitePoset.from_relation(labels, lambda a, b: a <= b)


def test_chain_and_antichain():
    assert FinitePoset.chain(5).euler_characteristic() == 1
    assert FinitePoset.antichain(4).euler_characteristic() == 4
    assert FinitePoset.antichain(4).reduced_euler_characteristic() == 3


def test_moebius_of_divisor_lattice():
    P = divisor_poset(12)
    mu = P.moebius_matrix()
    i, j = P.labels.index(1), P.labels.index(6)
    assert mu[i, j] == 1  # mu(1,6) = mu(6) = 1
    assert mu[P.labels.index(1), P.labels.index(12)] == 0
    assert (mu.astype(object).dot(P.zeta_matrix().astype(object)) == np.eye(P.size, dtype=object)).all()


def test_boolean_lattice_proper_part_is_sphere():
    P = boolean_poset(3)
    keep = [i for i, s in enumerate(P.labels) if 0 < len(s) < 3]
    Q = P.subposet(keep)
    assert Q.reduced_euler_characteristic() == -1  # a hexagon: the circle
    # explicit check through the chain oracle
    members = [P.labels[i] for i in keep]
    assert poset_euler(members, lambda a, b: a <= b) == Q.euler_characteristic()


def test_weighting_sums_to_euler_characteristic():
    P = divisor_poset(30)
    w = P.weighting()
    cw = P.coweighting()
    assert w.total == cw.total == P.euler_characteristic() == 1


def test_category_skeleton_group():
    # one object with a group of order 6: chi = 1/6
    C = CategorySkeleton(["*"], [[6]])
    assert C.euler_characteristic() == Fraction(1, 6)


def test_category_skeleton_undefined():
    C = CategorySkeleton(["a", "b"], [[1, 1], [0, 1]], validate=True)
    assert C.euler_characteristic() == 1
    D = CategorySkeleton(["a", "b"], [[2, 2], [0, 2]], validate=False)
    assert D.euler_characteristic() == Fraction(1, 2) - Fraction(1, 2) + Fraction(1, 2)


def test_skeleton_rejects_isomorphic_objects():
    with pytest.raises(ValueError):
        CategorySkeleton(["a", "b"], [[1, 1], [1, 1]])


def test_format_fraction():
    assert format_fraction(Fraction(8, 21)) == "8/21"
    assert format_fraction(Fraction(-3)) == "-3"


def test_solve_exact_against_oracle():
    M = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    b = [1, 2, 3]
    assert solve_exact(M, b) == gauss_solve(M, b)
    assert solve_exact([[1, 1], [1, 1]], [1, 2]) is None


def test_group_action_quotient():
    # C2 swapping two minimal elements below a common top
    P = FinitePoset.from_relation(["a", "b", "t"], lambda x, y: x == y or y == "t")
    swap = np.array([1, 0, 2])
    act = GroupActionOnPoset(P, 2, [swap], classes=[(np.arange(3), 1), (swap, 1)])
    assert quotient_delta_euler(act) == 1
    assert subdivision_orbit_euler(act) == 1
    Q, orb, k = orbit_poset(act)
    assert Q.size == 2


@st.composite
def random_posets(draw, max_size=9):
    n = draw(st.integers(min_value=1, max_value=max_size))
    # random DAG on a fixed linear order, then transitive closure
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    leq = np.eye(n, dtype=bool)
    for a, b in edges:
        if a < b:
            leq[a, b] = True
    for k in range(n):
        leq |= leq[:, [k]] & leq[[k], :]
    return FinitePoset(leq, list(range(n)))


@settings(max_examples=150, deadline=None)
@given(random_posets())
def test_moebius_zeta_inversion(P):
    Z = P.zeta_matrix().astype(object)
    M = P.moebius_matrix().astype(object)
    assert (M.dot(Z) == np.eye(P.size, dtype=object)).all()
    assert (Z.dot(M) == np.eye(P.size, dtype=object)).all()


@settings(max_examples=150, deadline=None)
@given(random_posets())
def test_euler_characteristic_paths_agree(P):
    chi = P.euler_characteristic()
    assert chi == P.euler_characteristic_via_chains()
    assert chi == P.weighting().total == P.coweighting().total
    assert chi == int(P.moebius_matrix().astype(object).sum())
    assert chi == poset_euler(list(range(P.size)), lambda a, b: bool(P.leq[a, b]))
    if P.size <= 6:
        assert P.subdivision().euler_characteristic() == chi


@settings(max_examples=150, deadline=None)
@given(random_posets(), st.data())
def test_weighting_restricts_to_left_ideals(P, data):
    # the weighting at x only sees the up-set of x, so it is unchanged on an
    # up-closed set (a left ideal in the convention used here); dually for the coweighting
    seed = data.draw(st.lists(st.integers(0, P.size - 1), max_size=3))
    up = sorted({j for i in seed for j in range(P.size) if P.leq[i, j]})
    down = sorted({j for i in seed for j in range(P.size) if P.leq[j, i]})
    w = P.weighting_values()
    cw = P.coweighting_values()
    if up:
        assert P.is_left_ideal(up)
        assert list(P.subposet(up).weighting_values()) == [w[i] for i in up]
    if down:
        assert P.is_right_ideal(down)
        assert list(P.subposet(down).coweighting_values()) == [cw[i] for i in down]
