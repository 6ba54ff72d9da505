"""Orbit categories of p-subgroups and the global identities they imply.

The orbit category ``O_G^p`` has the p-subgroups of ``G`` as objects and
``N_G(H,K)/K`` as morphisms ``H -> K``.  It is an EI-category whose skeleton
is indexed by the conjugacy classes of p-subgroups, with

    |hom(H, K)| = |N_G(H,K)| / |K| = |N_G(H)| * S([H], K) / |K|.

Its Euler characteristic is computed four ways which must agree: the density
of p-singular elements, the cyclic coweighting, the weighting built from the
Brown posets of the normalizer quotients N_G(H)/H, and the exact solve of the
skeleton's zeta system.

For a group ``A`` acting on ``G`` (a :class:`GroupPair`), two subcategories
on the A-normalized p-subgroups are built:

* ``centralized``:  hom(H, K) = {g in N_G(H,K) : [g, A] <= K} / K;
* ``transporter``:  hom(H, K) = C_{N_G(H,K)}(A) / C_K(A).

Every verifier returns a :class:`~eulerchi.reports.Report` and raises
:class:`~eulerchi.config.InvariantViolation` when an identity fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import InvariantViolation
from .permcore import (
    SubgroupHandle,
    as_subgroup,
    closure,
    commutator_subgroup,
    count_p_singular,
    is_cyclic,
    is_p_element_mask,
    normalizer,
    p_part,
    prime_divisors,
    quotient_map,
    transporter_mask,
)
from .posetcat import CategorySkeleton, EulerUndefined, FinitePoset, solve_exact
from .reports import Report
from .subgroups import GroupPair, SubgroupFamily, enumerate_p_subgroups, filter_radical, is_radical

# Member-level posets larger than this are replaced by their radical subposets,
# which carry the same weighting (the weighting vanishes off radical members).
FULL_POSET_LIMIT = 6000


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _p_singular_in(H: SubgroupHandle, p: int) -> int:
    return int(is_p_element_mask(H.parent, p)[H.idx].sum())


def commuting_mask(pair: GroupPair) -> np.ndarray:
    """Mask over the universe of the elements commuting with every generator of ``A``."""
    U = pair.ambient
    m = np.ones(U.order, dtype=bool)
    everything = np.arange(U.order, dtype=np.int64)
    for a in pair.A.gens:
        m &= U.commutators(everything, [a]) == 0
    return m


def _commutator_into_mask(pair: GroupPair, K: SubgroupHandle) -> np.ndarray:
    """Mask over ``G.idx`` of the g with [g, a] in K for every generator a of A."""
    U = pair.ambient
    m = np.ones(pair.G.order, dtype=bool)
    for a in pair.A.gens:
        m &= K.mask[U.commutators(pair.G.idx, [a])]
    return m


def normalized_mask(F: SubgroupFamily, elements: Sequence[int]) -> np.ndarray:
    """Mask over the members of ``F`` normalized by every given element."""
    U = F.universe
    m = np.ones(F.size, dtype=bool)
    for c in range(F.class_count):
        sl = F.class_slices[c]
        arr = F.class_array(c)
        ok = np.ones(arr.shape[0], dtype=bool)
        for a in elements:
            conj = np.sort(U.conjugate_by(arr, int(a)), axis=1)
            ok &= (conj == arr).all(axis=1)
        m[sl] = ok
    return m


def radical_member_mask(F: SubgroupFamily, p: int) -> np.ndarray:
    m = np.zeros(F.size, dtype=bool)
    for c in range(F.class_count):
        if is_radical(F.group, F.representative(c), p):
            m[F.class_slices[c]] = True
    return m


def _reduced_chi(F: SubgroupFamily, ids: Sequence[int]) -> int:
    ids = list(ids)
    if not ids:
        return -1
    return F.poset(ids).euler_characteristic() - 1


def _union_find_classes(n: int, maps: Sequence[np.ndarray]) -> np.ndarray:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mp in maps:
        for i, j in enumerate(mp.tolist()):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return np.array([find(i) for i in range(n)], dtype=np.int64)


# ---------------------------------------------------------------------------
# Brown posets of normalizer quotients
# ---------------------------------------------------------------------------


def centralized_brown_reduced(pair: GroupPair, p: int, family: SubgroupFamily | None = None) -> int:
    """chi~(C_S(A)) for the Brown poset S of ``pair.G``, on A-normalized radical members."""
    F = family if family is not None else enumerate_p_subgroups(pair.G, p)
    R = filter_radical(F, p).without_trivial()
    ids = np.nonzero(normalized_mask(R, pair.A.gens))[0].tolist()
    return _reduced_chi(R, ids)


def brown_reduced(G, p: int, family: SubgroupFamily | None = None) -> int:
    """chi~(S_G^{p+*}) computed on the radical subposet."""
    return centralized_brown_reduced(GroupPair.trivial_action(G), p, family)


def induced_pair(pair: GroupPair, H: SubgroupHandle) -> GroupPair:
    """N_G(H)/H with the induced action of A, realized on the cosets of H in N_G(H)A."""
    U = pair.ambient
    N = normalizer(pair.G, H)
    for a in pair.A.gens:
        if not H.mask[U.conjugate_by(np.array(H.gens or (0,)), a)].all():
            raise ValueError("A does not normalize H")
    P = closure(U, list(N.gens) + list(pair.A.gens))
    Q, image = quotient_map(H, P)
    GQ = SubgroupHandle(Q, np.unique(image[N.idx]))
    AQ = SubgroupHandle(Q, np.unique(image[pair.A.idx]))
    return GroupPair(Q, GQ, AQ)


def quotient_brown_weight(pair: GroupPair, H: SubgroupHandle, p: int) -> int:
    """-chi~(C_{S_{N_G(H)/H}^{p+*}}(A)) through the coset realization of N_G(H)/H."""
    if H.order == 1:
        return -centralized_brown_reduced(pair, p)
    return -centralized_brown_reduced(induced_pair(pair, H), p)


def radical_class_weights(F: SubgroupFamily, p: int) -> tuple[SubgroupFamily, list[int]]:
    """Radical subfamily and its class weighting -chi~(S_{N_G(H)/H}^{p+*}).

    The weighting solves  sum_[K] S(H,[K]) k[K] = 1  over the radical classes.
    """
    R = filter_radical(F, p)
    succ = R.class_table("successors")
    sol = solve_exact(succ, [1] * R.class_count)
    if sol is None or any(x.denominator != 1 for x in sol):
        raise InvariantViolation("radical class-table weighting is not integral")
    return R, [int(x) for x in sol]


# ---------------------------------------------------------------------------
# the orbit category O_G^p
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitCategorySkeleton:
    """Skeleton of an orbit category: one object per isomorphism class."""

    skeleton: CategorySkeleton
    representatives: tuple[SubgroupHandle, ...]
    class_sizes: tuple[int, ...]
    automorphism_orders: tuple[int, ...]
    kind: str

    @property
    def hom(self) -> list[list[int]]:
        return self.skeleton.hom

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(H.order for H in self.representatives)


def family_orbit_skeleton(F: SubgroupFamily, kind: str | None = None) -> OrbitCategorySkeleton:
    """Skeleton of the orbit category on a conjugation-closed family of subgroups.

    hom([H], [K]) = |N_G(H,K)| / |K| = |N_G(H)| S([H], K) / |K|.
    """
    pred = F.class_table("predecessors")
    n = F.class_count
    hom = [[0] * n for _ in range(n)]
    for h in range(n):
        nh = F.normalizer_order(h)
        for k in range(n):
            if pred[h, k]:
                num = nh * int(pred[h, k])
                K = F.representative(k).order
                if num % K:
                    raise InvariantViolation("transporter count is not a union of cosets")
                hom[h][k] = num // K
    reps = tuple(F.representative(c) for c in range(n))
    auts = tuple(F.normalizer_order(c) // reps[c].order for c in range(n))
    for c in range(n):
        if hom[c][c] != auts[c]:
            raise InvariantViolation("automorphism group of an object is not N_G(H)/H")
    return OrbitCategorySkeleton(CategorySkeleton([H.order for H in reps], hom), reps,
                                 tuple(F.class_lengths), auts, kind or F.kind)


def orbit_category_skeleton(G, p: int, family: SubgroupFamily | None = None) -> OrbitCategorySkeleton:
    """Skeleton of O_G^p on the conjugacy classes of p-subgroups."""
    F = family if family is not None else enumerate_p_subgroups(as_subgroup(G), p)
    return family_orbit_skeleton(F, f"O^{p}")


def orbit_category_euler(G, p: int, family: SubgroupFamily | None = None,
                         check_quotients: bool = False) -> Report:
    """chi(O_G^p) by element count, cyclic coweighting, radical weighting and zeta-solve."""
    Gs = as_subgroup(G)
    F = family if family is not None else enumerate_p_subgroups(Gs, p)
    order = Gs.order
    rep = Report("orbit_category_euler")
    count = count_p_singular(Gs, p)
    density = Fraction(count, order)

    # coweighting: 1/|G| at 1, (1 - 1/p)|K|/|G| at nontrivial cyclic K
    sk = orbit_category_skeleton(Gs, p, F)
    cow_formula = []
    for c, H in enumerate(sk.representatives):
        if H.order == 1:
            k = Fraction(1, order)
        elif is_cyclic(H):
            k = (1 - Fraction(1, p)) * H.order / order
        else:
            k = Fraction(0)
        cow_formula.append(k * sk.class_sizes[c])
    cow_total = sum(cow_formula, Fraction(0))

    # weighting: -chi~(S_{N(H)/H}) / |N(H):H| on radical classes
    R, weights = radical_class_weights(F, p)
    w_formula = [Fraction(0)] * F.class_count
    for c in range(R.class_count):
        H = R.representative(c)
        w_formula[F.class_of_subgroup(H)] = Fraction(weights[c], R.normalizer_order(c) // H.order)
    w_total = sum(w_formula, Fraction(0))

    w = sk.skeleton.weighting()
    cw = sk.skeleton.coweighting()
    if w is None or cw is None:
        raise InvariantViolation("orbit category skeleton has no weighting")
    rep.equal("coweighting formula = density", cow_total, density)
    rep.equal("weighting formula = density", w_total, density)
    rep.equal("zeta-solve weighting total = density", w.total, density)
    rep.equal("zeta-solve coweighting total = density", cw.total, density)
    rep.check("zeta-solve coweighting matches the cyclic formula", list(cw.values), cow_formula, "==")
    rep.check("zeta-solve weighting matches the radical formula", list(w.values), w_formula, "==")
    if check_quotients:
        pair = GroupPair.trivial_action(Gs)
        q = [quotient_brown_weight(pair, R.representative(c), p) for c in range(R.class_count)]
        rep.check("class-table weights match normalizer-quotient Brown posets", weights, q, "==")
    rep.values = {
        "p": p,
        "group_order": order,
        "p_singular": count,
        "chi": density,
        "chi_times_order": density * order,
    }
    rep.header = ["|H|"] + list(R.class_orders)
    rep.rows = [["-chi~(S_N(H)/H)"] + weights,
                ["length"] + R.class_lengths,
                ["|N(H):H|"] + [R.normalizer_order(c) // R.representative(c).order for c in range(R.class_count)]]
    return rep.require()


def global_identity(G, p: int, family: SubgroupFamily | None = None) -> Report:
    """sum over radical H of -chi~(S_{N(H)/H}) |H| = |G_p|, and the upward affine sums."""
    Gs = as_subgroup(G)
    F = family if family is not None else enumerate_p_subgroups(Gs, p)
    rep = Report("global_identity")
    R, weights = radical_class_weights(F, p)
    pair = GroupPair.trivial_action(Gs)
    qweights = [quotient_brown_weight(pair, R.representative(c), p) for c in range(R.class_count)]
    rep.check("class-table weights match normalizer-quotient Brown posets", weights, qweights, "==")
    lengths = R.class_lengths
    orders = R.class_orders
    total = sum(k * n * o for k, n, o in zip(qweights, lengths, orders))
    count = count_p_singular(Gs, p)
    rep.equal("sum -chi~(S_N(H)/H) |H| = |G_p|", total, count)
    succ = R.class_table("successors")
    for h in range(R.class_count):
        s = sum(int(succ[h, k]) * qweights[k] for k in range(R.class_count))
        rep.equal(f"upward sum over radical K >= H (|H|={orders[h]}, class {h})", s, 1)
    rep.header = ["|H|"] + orders
    rep.rows = [["-chi~(S_N(H)/H)"] + qweights, ["length"] + lengths,
                ["product"] + [k * n * o for k, n, o in zip(qweights, lengths, orders)]]
    rep.values = {"p": p, "sum": total, "p_singular": count}
    return rep.require()


def frobenius_brown_bridge(G, p: int, family: SubgroupFamily | None = None) -> Report:
    """|G_p| + chi~(S_G) + sum_{[H] != 1} chi~(S_O(H))/|O(H)|_p * |G|/|O(H)|_p' = 0, O(H) = N(H)/H."""
    Gs = as_subgroup(G)
    F = family if family is not None else enumerate_p_subgroups(Gs, p)
    rep = Report("frobenius_brown_bridge")
    order = Gs.order
    gp = p_part(order, p)
    count = count_p_singular(Gs, p)
    chi_t = brown_reduced(Gs, p, F)
    R, weights = radical_class_weights(F, p)
    terms = []
    rows = []
    for c in range(R.class_count):
        H = R.representative(c)
        if H.order == 1:
            rep.equal("chi~(S_G) from the class table", -weights[c], chi_t)
            continue
        aut = R.normalizer_order(c) // H.order
        aut_p = p_part(aut, p)
        aut_pp = aut // aut_p
        red = -weights[c]
        first = Fraction(red, aut_p)
        second = Fraction(order, aut_pp)
        rep.check(f"|O(H)|_p divides chi~(S_O(H)) (|H|={H.order})", aut_p, red, "|")
        rep.check(f"|G|_p divides |G|/|O(H)|_p' (|H|={H.order})", gp, second, "|")
        terms.append(first * second)
        rows.append([H.order, red, aut_p, aut_pp, first, second, first * second])
    total = count + chi_t + sum(terms, Fraction(0))
    rep.equal("|G_p| + chi~(S_G) + sum of terms = 0", total, 0)
    rep.divides("Frobenius: |G|_p divides |G_p|", gp, count)
    rep.divides("Brown: |G|_p divides chi~(S_G)", gp, chi_t)
    rep.header = ["|H|", "chi~(S_O(H))", "|O(H)|_p", "|O(H)|_p'", "first", "second", "term"]
    rep.rows = rows
    rep.values = {"p": p, "p_singular": count, "reduced_chi": chi_t, "p_part": gp}
    return rep.require()


def webb_identity(G, p: int, full: bool = False, family: SubgroupFamily | None = None) -> Report:
    """sum_{[x]} chi(C_S(x)) |G:C_G(x)| = |G| and its reduced form sum = 0."""
    from .equivariant import brown_equivariant_poset, classes_of

    Gs = as_subgroup(G)
    if Gs.order % p:
        raise ValueError("p must divide the group order")
    E = brown_equivariant_poset(Gs, p, full=full, family=family)
    data = classes_of(Gs)
    chis = [E.chi(E.fixed(x)) for x in data.representatives]
    idx = [Gs.order // c for c in data.centralizer_orders]
    rep = Report("webb_identity")
    rep.equal("sum chi(C_S(x)) |G:C_G(x)| = |G|", sum(a * b for a, b in zip(chis, idx)), Gs.order)
    rep.equal("sum chi~(C_S(x)) |G:C_G(x)| = 0", sum((a - 1) * b for a, b in zip(chis, idx)), 0)
    rep.header = ["|x|"] + list(data.element_orders)
    rep.rows = [["chi~(C_S(x))"] + [a - 1 for a in chis], ["|G:C_G(x)|"] + idx]
    rep.values = {"p": p}
    return rep.require()


def orbit_V_coweighting(V, p: int) -> Report:
    """Coweighting of O_V for an elementary abelian p-group V, by subgroup dimension."""
    Vs = as_subgroup(V)
    if Vs.order > 1 and (prime_divisors(Vs.order) != [p] or
                         not np.all(np.isin(Vs.parent.element_orders[Vs.idx], (1, p)))):
        raise ValueError("V must be an elementary abelian p-group")
    sk = orbit_category_skeleton(Vs, p)
    cw = sk.skeleton.coweighting()
    rep = Report("orbit_V_coweighting")
    expected = []
    for H, n in zip(sk.representatives, sk.class_sizes):
        if H.order == 1:
            k = Fraction(1, Vs.order)
        elif H.order == p:
            k = Fraction(p - 1, Vs.order)
        else:
            k = Fraction(0)
        expected.append(k * n)
    rep.check("zeta-solve coweighting matches the dimension formula",
              list(cw.values) if cw else None, expected, "==")
    rep.equal("chi(O_V) = 1", cw.total if cw else 0, 1)
    return rep.require()


# ---------------------------------------------------------------------------
# Theorem: A-equivariant global identities
# ---------------------------------------------------------------------------


def _normalizer_of_A_in_G(pair: GroupPair) -> SubgroupHandle:
    m = transporter_mask(pair.G, pair.A, pair.A)
    return SubgroupHandle(pair.ambient, pair.G.idx[m])


def _member_orbits(F: SubgroupFamily, ids: list[int], elements: Sequence[int]) -> np.ndarray:
    maps = [F.conjugation_map(int(g), ids) for g in elements]
    return _union_find_classes(len(ids), maps)


def theorem1_verify(pair: GroupPair, p: int, family: SubgroupFamily | None = None,
                    check_quotients: bool = True) -> Report:
    """The three A-equivariant global statements for the Brown poset.

    (1) sum over A-normalized radical H of -chi~(C_{S_{N(H)/H}}(A)) |C_H(A)| = |C_G(A)_p|;
    (2) for each A-normalized radical H, the weights of the A-normalized radical K >= H sum to 1;
    (3) |C_G(A)|_p divides chi~(C_S(A)).
    The weights are the weighting of the poset of A-normalized p-subgroups; with
    ``check_quotients`` they are compared to Brown posets of N_G(H)/H with the
    induced action of A, one representative per N_G(A)-orbit.
    """
    G = pair.G
    U = pair.ambient
    F = family if family is not None else enumerate_p_subgroups(G, p)
    rep = Report("theorem1")
    anorm = normalized_mask(F, pair.A.gens)
    rad = radical_member_mask(F, p)
    full = int(anorm.sum()) <= FULL_POSET_LIMIT
    keep = anorm if full else (anorm & rad)
    ids = np.nonzero(keep)[0].tolist()
    P = F.poset(ids)
    w = P.weighting_values()
    pos = {m: j for j, m in enumerate(ids)}
    if full:
        off = [int(w[j]) for j, m in enumerate(ids) if not rad[m] and w[j] != 0]
        rep.check("weighting vanishes off G-radical members", off, [], "==")
    rad_ids = [m for m in ids if rad[m]]
    cm = commuting_mask(pair)
    C = pair.centralizer_in_G
    cg_p = _p_singular_in(C, p)

    # part (1)
    total = 0
    for m in rad_ids:
        total += int(w[pos[m]]) * int(cm[F.members[m].idx].sum())
    rep.equal("(1) sum -chi~(C_S_N(H)/H(A)) |C_H(A)| = |C_G(A)_p|", total, cg_p)

    # part (2): upward sums over A-normalized radical members
    sub = FinitePoset(P.leq[np.ix_([pos[m] for m in rad_ids], [pos[m] for m in rad_ids])], rad_ids,
                      validate=False)
    wr = np.array([int(w[pos[m]]) for m in rad_ids], dtype=object)
    ups = (sub.leq.astype(object) @ wr) if rad_ids else np.zeros(0, dtype=object)
    bad = [rad_ids[i] for i, s in enumerate(ups.tolist()) if s != 1]
    rep.check("(2) upward sums over A-normalized radical K >= H equal 1", bad, [], "==")

    # part (3)
    trivial_pos = pos.get(F.index_of[U.trivial().key])
    chi_direct = centralized_brown_reduced(pair, p, F)
    if trivial_pos is not None:
        rep.equal("chi~(C_S(A)) from the weighting at the trivial subgroup", -int(w[trivial_pos]), chi_direct)
    cgp = p_part(C.order, p)
    rep.divides("(3) |C_G(A)|_p divides chi~(C_S(A))", cgp, chi_direct)

    # induced actions on normalizer quotients
    quotient_rows = []
    if check_quotients and rad_ids:
        NA = _normalizer_of_A_in_G(pair)
        orbit_of = _member_orbits(F, rad_ids, NA.gens)
        for i in sorted(set(orbit_of.tolist())):
            m = rad_ids[i]
            H = F.members[m]
            q = quotient_brown_weight(pair, H, p)
            quotient_rows.append([H.order, int((orbit_of == i).sum()), int(w[pos[m]]), q])
            rep.equal(f"weight at H (|H|={H.order}) = -chi~ of the induced quotient poset", int(w[pos[m]]), q)

    rep.header = ["|H|", "orbit length", "weight", "quotient"]
    rep.rows = quotient_rows
    rep.values = {
        "p": p,
        "part1_sum": total,
        "centralizer_p_singular": cg_p,
        "reduced_chi": chi_direct,
        "centralizer_p_part": cgp,
        "radical_members": len(rad_ids),
    }
    return rep.require()


# ---------------------------------------------------------------------------
# centralized orbit categories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Objects:
    ids: list[int]
    class_of: np.ndarray
    reps: list[int]
    sizes: list[int]


def _iso_classes(pair: GroupPair, F: SubgroupFamily, ids: list[int], variant: str) -> _Objects:
    U = pair.ambient
    G = pair.G
    pos = {m: j for j, m in enumerate(ids)}
    class_of = np.full(len(ids), -1, dtype=np.int64)
    reps: list[int] = []
    sizes: list[int] = []
    cm_G = commuting_mask(pair)[G.idx] if variant == "transporter" else None
    for j, m in enumerate(ids):
        if class_of[j] >= 0:
            continue
        K = F.members[m]
        if variant == "centralized":
            T = _commutator_into_mask(pair, K)
        else:
            T = cm_G.copy()
        N = transporter_mask(G, K, K)
        S = G.idx[T & N]
        remaining = T.copy()
        c = len(reps)
        reps.append(m)
        count = 0
        gpos = np.full(U.order, -1, dtype=np.int64)
        gpos[G.idx] = np.arange(G.order)
        while remaining.any():
            # an element g of T gives the isomorphism K^(g^-1) -> K (the coset gK)
            g = int(G.idx[np.flatnonzero(remaining)[0]])
            L = SubgroupHandle(U, U.conjugate_by(K.idx, int(U.inverse[g])))
            k = F.index_of.get(L.key)
            if k is None or k not in pos:
                raise InvariantViolation("an isomorphic object is not A-normalized")
            if class_of[pos[k]] not in (-1, c):
                raise InvariantViolation("isomorphism classes overlap")
            class_of[pos[k]] = c
            count += 1
            remaining[gpos[U.mul(g, S)]] = False
        expected = int(T.sum()) // int((T & N).sum())
        if count != expected or int(T.sum()) % int((T & N).sum()):
            raise InvariantViolation("isomorphism class size differs from the transporter count")
        sizes.append(count)
    return _Objects(ids, class_of, reps, sizes)


def centralized_orbit_category(pair: GroupPair, p: int, variant: str = "centralized",
                               family: SubgroupFamily | None = None) -> OrbitCategorySkeleton:
    """Skeleton of C_{O_G^p}(A) (``centralized``) or O_(G,A)^p (``transporter``)."""
    if variant not in ("centralized", "transporter"):
        raise ValueError(variant)
    G = pair.G
    F = family if family is not None else enumerate_p_subgroups(G, p)
    ids = np.nonzero(normalized_mask(F, pair.A.gens))[0].tolist()
    objs = _iso_classes(pair, F, ids, variant)
    cm = commuting_mask(pair)
    cm_G = cm[G.idx]
    reps = [F.members[m] for m in objs.reps]
    n = len(reps)
    hom = [[0] * n for _ in range(n)]
    into = [(_commutator_into_mask(pair, K) if variant == "centralized" else cm_G) for K in reps]
    for h, H in enumerate(reps):
        for k, K in enumerate(reps):
            if K.order < H.order or K.order % H.order:
                continue
            t = transporter_mask(G, H, K)
            num = int((t & into[k]).sum())
            den = K.order if variant == "centralized" else int(cm[K.idx].sum())
            if num % den:
                raise InvariantViolation("hom count is not an integer")
            hom[h][k] = num // den
    auts = tuple(hom[c][c] for c in range(n))
    return OrbitCategorySkeleton(CategorySkeleton([H.order for H in reps], hom), tuple(reps),
                                 tuple(objs.sizes), auts, variant)


def centralized_orbit_category_euler(pair: GroupPair, p: int, variant: str = "centralized",
                                     family: SubgroupFamily | None = None) -> Report:
    """chi of the centralized (or transporter) orbit category, with the weighting formulas.

    The value is ``None`` in the report when the zeta system admits neither a
    weighting nor a coweighting.
    """
    G = pair.G
    F = family if family is not None else enumerate_p_subgroups(G, p)
    sk = centralized_orbit_category(pair, p, variant, F)
    rep = Report(f"orbit_category[{variant}]")
    cm = commuting_mask(pair)
    C = pair.centralizer_in_G
    try:
        chi = sk.skeleton.euler_characteristic()
    except EulerUndefined:
        chi = None
    density = Fraction(_p_singular_in(C, p), C.order)

    # weighting formula from the A-normalized Brown posets
    anorm_ids = np.nonzero(normalized_mask(F, pair.A.gens))[0].tolist()
    wvals = FinitePoset(F.containment(anorm_ids), anorm_ids, validate=False).weighting_values() \
        if len(anorm_ids) <= FULL_POSET_LIMIT else None
    if wvals is not None:
        wpos = {m: int(wvals[j]) for j, m in enumerate(anorm_ids)}
        expected = []
        for H, size in zip(sk.representatives, sk.class_sizes):
            k = wpos[F.index_of[H.key]]
            if variant == "centralized":
                denom = Fraction(int(_commutator_into_mask(pair, H).sum()), H.order)
            else:
                denom = Fraction(C.order, int(cm[H.idx].sum()))
            expected.append(Fraction(k) / denom * size)
        w = sk.skeleton.weighting()
        if w is not None:
            rep.check("zeta-solve weighting matches the Brown-poset formula", list(w.values), expected, "==")
        elif chi is not None:
            rep.equal("Euler characteristic matches the Brown-poset weighting sum", chi, sum(expected, Fraction(0)))
    if variant == "transporter":
        rep.equal("chi(O_(G,A)) = density of p-singular elements in C_G(A)", chi if chi is not None else -1,
                  density)
        cow = []
        for H, size in zip(sk.representatives, sk.class_sizes):
            if H.order == 1:
                k = Fraction(1, C.order)
            elif is_cyclic(H) and bool(cm[H.idx].all()):
                k = (1 - Fraction(1, p)) * H.order / C.order
            else:
                k = Fraction(0)
            cow.append(k * size)
        cw = sk.skeleton.coweighting()
        rep.check("zeta-solve coweighting matches the cyclic formula",
                  list(cw.values) if cw else None, cow, "==")
    else:
        # |[K]| |hom(K,K)| = |C_G(A):K| when [K,A] = 1 and gcd(|K|,|A|) = 1
        for H, size, aut in zip(sk.representatives, sk.class_sizes, sk.automorphism_orders):
            if bool(cm[H.idx].all()) and np.gcd(H.order, pair.A.order) == 1:
                rep.equal(f"|[K]| |Aut(K)| = |C_G(A):K| (|K|={H.order})", size * aut,
                          Fraction(C.order, H.order))
        if pair.A.order % p:
            other = centralized_orbit_category(pair, p, "transporter", F)
            rep.check("p-regular A: centralized and transporter hom counts agree", sk.hom, other.hom, "==")
            rep.check("p-regular A: isomorphism class sizes agree", list(sk.class_sizes),
                      list(other.class_sizes), "==")
    rep.header = ["|K|"] + list(sk.orders)
    rep.rows = [["class size"] + list(sk.class_sizes), ["|Aut(K)|"] + list(sk.automorphism_orders)]
    rep.values = {"p": p, "variant": variant, "chi": "undefined" if chi is None else chi,
                  "centralizer_density": density}
    return rep.require()


# ---------------------------------------------------------------------------
# ideals of the centralized Brown poset
# ---------------------------------------------------------------------------


def ideal_decomposition(pair: GroupPair, p: int, family: SubgroupFamily | None = None) -> Report:
    """Left ideals {C_K(A) != K}, {C_K(A) != 1} of C_S(A) for p-regular A and their identities."""
    if pair.A.order % p == 0:
        raise ValueError("A must be p-regular")
    G = pair.G
    F = family if family is not None else enumerate_p_subgroups(G, p)
    rep = Report("ideal_decomposition")
    anorm = normalized_mask(F, pair.A.gens)
    nontrivial = np.array([H.order > 1 for H in F.members], dtype=bool)
    rad = radical_member_mask(F, p)
    full = int((anorm & nontrivial).sum()) <= FULL_POSET_LIMIT
    keep = anorm & nontrivial & (True if full else rad)
    ids = np.nonzero(keep)[0].tolist()
    cm = commuting_mask(pair)
    cK = {m: int(cm[F.members[m].idx].sum()) for m in ids}
    S1 = [m for m in ids if cK[m] != F.members[m].order]
    S2 = [m for m in ids if cK[m] != 1]
    S12 = [m for m in S1 if cK[m] != 1]
    P = F.poset(ids)
    pos = {m: j for j, m in enumerate(ids)}
    rep.check("{C_K(A) != K} is a left ideal", P.is_left_ideal([pos[m] for m in S1]), True, "==")
    rep.check("{C_K(A) != 1} is a left ideal", P.is_left_ideal([pos[m] for m in S2]), True, "==")
    chi_S = _reduced_chi(F, ids)
    C = pair.centralizer_in_G
    chi_C = brown_reduced(C, p) if C.order % p == 0 else -1
    chi_1 = _reduced_chi(F, S1)
    chi_2 = _reduced_chi(F, S2)
    chi_12 = _reduced_chi(F, S12)
    cgp = p_part(C.order, p)
    rep.equal("chi(S2) = chi(S_{C_G(A)}) (adjunction K -> C_K(A))", chi_2, chi_C)
    rep.equal("Mayer-Vietoris: chi(C_S(A)) = chi(S1) + chi(S2) - chi(S1 & S2)",
              chi_S + 1, (chi_1 + 1) + (chi_2 + 1) - (chi_12 + 1))
    rep.equal("chi(C_S(A)) - chi(S_{C_G(A)}) = chi(S1) - chi(S1 & S2)", chi_S - chi_C, chi_1 - chi_12)
    rep.divides("chi(S1) = chi(S1 & S2) mod |C_G(A)|_p", cgp, chi_1 - chi_12)
    rep.divides("|C_G(A)|_p divides chi~(C_S(A))", cgp, chi_S)
    rep.divides("|C_G(A)|_p divides chi~(S_{C_G(A)})", cgp, chi_C)
    if full and len(ids) <= 2000:
        perfect = [m for m in ids if commutator_subgroup(F.members[m], pair.A).key == F.members[m].key]
        rep.equal("chi(S1) = chi({[H,A] = H}) (adjunction K -> [K,A])", chi_1, _reduced_chi(F, perfect))
    rad_ids = [m for m in ids if rad[m]]
    hypothesis = all(cK[m] != 1 for m in rad_ids)
    if hypothesis:
        rep.equal("C_K(A) != 1 on radical members: chi(S_{C_G(A)}) = chi(C_S(A))", chi_C, chi_S)
    rep.header = ["chi~(C_S(A))", "chi~(S_C_G(A))", "chi~{C_K(A) < K}", "chi~{1 < C_K(A) < K}", "|C_G(A)|_p"]
    rep.rows = [[chi_S, chi_C, chi_1, chi_12, cgp]]
    rep.values = {"p": p, "row": [chi_S, chi_C, chi_1, chi_12, cgp], "radical_hypothesis": hypothesis}
    return rep.require()
