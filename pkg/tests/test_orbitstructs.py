from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eulerchi.conjectures import artin_hasse_counts
from eulerchi.permcore import parse_generators, symmetric_group
from eulerchi.orbitstructs import (
    brown_reduced,
    centralized_orbit_category_euler,
    frobenius_brown_bridge,
    global_identity,
    ideal_decomposition,
    orbit_category_euler,
    orbit_category_skeleton,
    theorem1_verify,
    webb_identity,
)
from eulerchi.subgroups import GroupPair

from conftest import named


def pair(degree, g_gens, a_gens):
    return GroupPair.from_generators(degree, parse_generators(g_gens, degree), parse_generators(a_gens, degree))


def sym(n):
    return "(1,2);(" + ",".join(str(i) for i in range(1, n + 1)) + ")" if n > 2 else "(1,2)"


def test_brown_gl32_and_sl33():
    assert -brown_reduced(named("GL(3,2)").whole(), 2) == 8
    assert -brown_reduced(named("SL(3,3)").whole(), 2) == 352


def test_global_identity_gl32():
    rep = global_identity(named("GL(3,2)").whole(), 2)
    assert rep.header == ["|H|", 8, 4, 4, 1]
    assert rep.rows[0][1:] == [1, -2, -2, 8]
    assert rep.rows[1][1:] == [21, 7, 7, 1]
    assert rep.values["sum"] == rep.values["p_singular"] == 64


def test_global_identity_sl33():
    rep = global_identity(named("SL(3,3)").whole(), 2)
    assert rep.rows[0][1:] == [1, -2, -2, 352]


def test_orbit_category_gl32():
    rep = orbit_category_euler(named("GL(3,2)").whole(), 2, check_quotients=True)
    assert rep.values["chi"] == Fraction(8, 21)
    assert rep.passed


def test_frobenius_brown_bridge_gl32():
    rep = frobenius_brown_bridge(named("GL(3,2)").whole(), 2)
    assert [row[-1] for row in rep.rows] == [-168, 56, 56]


WEBB_GL32 = {2: (-8, 0, 1, 0, -1, -1), 3: (27, 3, 0, -1, -1, -1), 7: (7, -1, 1, -1, 0, 0)}


@pytest.mark.parametrize("p", [2, 3, 7])
def test_webb_gl32(p):
    rep = webb_identity(named("GL(3,2)").whole(), p)
    assert tuple(rep.rows[0][1:]) == WEBB_GL32[p]
    assert rep.rows[1][1:] == [1, 21, 56, 42, 24, 24]


def test_webb_requires_p_dividing():
    with pytest.raises(ValueError):
        webb_identity(named("S3").whole(), 5)


@pytest.mark.parametrize("n", range(1, 8))
def test_symmetric_orbit_category_matches_series(n):
    G = symmetric_group(n).whole()
    if n == 1:
        assert artin_hasse_counts(2, 1) == [1]
        return
    rep = orbit_category_euler(G, 2)
    assert rep.values["chi_times_order"] == artin_hasse_counts(2, n)[-1]


def test_theorem1_s5_three_cycle():
    rep = theorem1_verify(pair(5, "(1,2);(1,2,3,4,5)", "(1,2,3)"), 2)
    assert rep.values["part1_sum"] == 2


def test_theorem1_s7_s3():
    rep = theorem1_verify(pair(7, sym(7), "(1,2);(1,2,3)"), 2)
    assert rep.values["reduced_chi"] == -8
    assert rep.values["centralizer_p_part"] == 8


def test_centralized_orbit_category_s4():
    pr = pair(4, sym(4), "(1,2)(3,4)")
    assert centralized_orbit_category_euler(pr, 2, "centralized").values["chi"] == Fraction(2, 3)
    assert centralized_orbit_category_euler(pr, 2, "transporter").values["chi"] == 1


S7_IDEAL_ROWS = {
    "()": [160, 160, -1, -1, 16],
    "(1,2,3)": [-8, 0, 3, 11, 8],
    "(1,2,3)(4,5,6)": [4, 2, 4, 2, 2],
    "(1,2,3,4,5)": [0, 0, -1, -1, 2],
    "(1,2,3,4,5,6,7)": [-1, -1, -1, -1, 1],
    "(1,2,3);(4,5,6)": [1, -1, 1, -1, 1],
}


@pytest.mark.parametrize("a", sorted(S7_IDEAL_ROWS))
def test_s7_ideal_table(a):
    pr = pair(7, sym(7), a) if a != "()" else GroupPair.trivial_action(symmetric_group(7))
    assert ideal_decomposition(pr, 2).values["row"] == S7_IDEAL_ROWS[a]


def test_ideal_decomposition_needs_p_regular():
    with pytest.raises(ValueError):
        ideal_decomposition(pair(4, sym(4), "(1,2)"), 2)


def test_orbit_skeleton_counts():
    sk = orbit_category_skeleton(named("S4").whole(), 2)
    assert sk.skeleton.euler_characteristic() == Fraction(16, 24)


SMALL_PAIRS = [
    (4, sym(4), "(1,2,3)", 2), (4, sym(4), "(1,2)(3,4)", 2), (4, sym(4), "(1,2)", 3),
    (5, sym(5), "(1,2,3)", 2), (5, sym(5), "(1,2,3,4,5)", 2), (5, sym(5), "(1,2)(3,4)", 3),
    (5, "(1,2,3);(1,2,4);(1,2,5)", "(1,2)", 2), (5, "(1,2,3);(1,2,4);(1,2,5)", "(1,2)", 3),
    (5, "(1,2,3);(1,2,4);(1,2,5)", "(1,2,3,4,5)", 3), (6, sym(6), "(1,2,3)(4,5,6)", 2),
    (6, sym(6), "(1,2)(3,4)(5,6)", 3), (6, "(1,2,3);(1,2,4);(1,2,5);(1,2,6)", "(1,2,3,4,5)", 2),
]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL_PAIRS), st.sampled_from(["centralized", "transporter"]))
def test_centralized_identities_suite(case, variant):
    """Theorem parts (1)-(3), the orbit-category formulas and, for p-regular A,
    the ideal congruence chi(S1) = chi(S1 & S2) mod |C_G(A)|_p."""
    degree, g, a, p = case
    pr = pair(degree, g, a)
    assert theorem1_verify(pr, p, check_quotients=False).passed
    rep = centralized_orbit_category_euler(pr, p, variant)
    assert rep.passed
    if pr.A.order % p:
        row = ideal_decomposition(pr, p).values["row"]
        assert (row[2] - row[3]) % row[4] == 0
        assert row[0] % row[4] == 0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([("S3", 2), ("S3", 3), ("S4", 2), ("S4", 3), ("A4", 2), ("A5", 2), ("A5", 3),
                        ("A5", 5), ("S5", 2), ("S5", 3), ("S5", 5), ("GL(3,2)", 2), ("GL(3,2)", 3),
                        ("GL(3,2)", 7), ("A6", 2), ("A6", 3), ("C12", 2), ("C12", 3)]))
def test_frobenius_and_brown_divisibility(case):
    name, p = case
    G = named(name).whole()
    rep = frobenius_brown_bridge(G, p)
    gp = rep.values["p_part"]
    assert rep.values["p_singular"] % gp == 0
    assert rep.values["reduced_chi"] % gp == 0
    assert orbit_category_euler(G, p).passed
    assert global_identity(G, p).passed
