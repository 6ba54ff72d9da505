"""Equivariant Euler characteristics, Euler class functions and Artin coefficients.

The central object is :class:`EquivariantPoset`: a finite set of subgroups
(members of a :class:`SubgroupFamily`) that is stable under conjugation by an
acting group ``A``, ordered by inclusion.  For a tuple of commuting elements
the centralized subposet is the set of members normalized by all of them.

``chi_r`` is computed by two independent routes which must agree:

* the class recursion  chi_r(S, A) = sum_{[x] in [A]} chi_{r-1}(C_S(x), C_A(x)),
  with chi_0(S, A) = chi(S) / |A|;
* the abelian-subgroup sum  chi_r(S, A) = sum_{[B]} chi(C_S(B)) phi_r(B) / |N_A(B)|
  over the A-classes of abelian subgroups generated by at most ``r`` elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import InvariantViolation
from .permcore import (
    ConjugacyData,
    SubgroupHandle,
    as_subgroup,
    centralizer,
    conjugacy_classes,
    is_abelian,
    normalizer,
    prime_divisors,
)
from .posetcat import FinitePoset, solve_exact
from .subgroups import SubgroupFamily, enumerate_abelian_subgroups

# ---------------------------------------------------------------------------
# cached group data
# ---------------------------------------------------------------------------

_CLASS_CACHE: dict[tuple[int, bytes], ConjugacyData] = {}


def classes_of(A: SubgroupHandle) -> ConjugacyData:
    key = (id(A.parent), A.key)
    data = _CLASS_CACHE.get(key)
    if data is None:
        data = conjugacy_classes(A)
        if len(_CLASS_CACHE) > 20000:
            _CLASS_CACHE.clear()
        _CLASS_CACHE[key] = data
    return data


# ---------------------------------------------------------------------------
# commuting tuples and generating tuples
# ---------------------------------------------------------------------------


def commuting_tuple_count(A, r: int) -> int:
    """|C_r(A)|, the number of pairwise commuting r-tuples in A."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return _ctc(as_subgroup(A), r, {})


def _ctc(A: SubgroupHandle, r: int, memo: dict) -> int:
    if r == 0:
        return 1
    if r == 1:
        return A.order
    key = (A.key, r)
    if key in memo:
        return memo[key]
    data = classes_of(A)
    total = 0
    for x, size in zip(data.representatives, data.class_sizes):
        total += size * _ctc(centralizer(A, [x]), r - 1, memo)
    memo[key] = total
    return total


def commuting_tuple_count_bruteforce(A, r: int) -> int:
    """Direct enumeration of commuting r-tuples (small groups only)."""
    As = as_subgroup(A)
    U = As.parent
    idx = As.idx
    if r == 0:
        return 1
    comm = U.commutators(idx, idx).reshape(idx.size, idx.size) == 0
    count = 0
    for tup in itertools.product(range(idx.size), repeat=r):
        if all(comm[a, b] for a, b in itertools.combinations(tup, 2)):
            count += 1
    return count


def _abelian_signature(A: SubgroupHandle) -> tuple:
    orders = A.parent.element_orders[A.idx]
    vals, counts = np.unique(orders, return_counts=True)
    return tuple(zip(vals.tolist(), counts.tolist()))


_PHI_CACHE: dict[tuple, int] = {}


def phi_r(A, r: int) -> int:
    """Number of commuting r-tuples generating ``A`` (zero unless ``A`` is abelian)."""
    As = as_subgroup(A)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if not is_abelian(As):
        return 0
    if r == 0:
        return 1 if As.order == 1 else 0
    sig = (_abelian_signature(As), r)
    if sig in _PHI_CACHE:
        return _PHI_CACHE[sig]
    value = _phi_moebius(As, r)
    # multiplicativity over the Sylow factors
    if len(prime_divisors(As.order)) > 1:
        prod = 1
        for p in prime_divisors(As.order):
            orders = As.parent.element_orders[As.idx]
            m = orders.copy()
            while True:
                d = m % p == 0
                if not d.any():
                    break
                m = np.where(d, m // p, m)
            Op = SubgroupHandle(As.parent, As.idx[m == 1])
            prod *= phi_r(Op, r)
        if prod != value:
            raise InvariantViolation("phi_r is not multiplicative over Sylow factors")
    _PHI_CACHE[sig] = value
    return value


def _phi_moebius(A: SubgroupHandle, r: int) -> int:
    """Moebius inversion of  sum_{B <= A} phi_r(B) = |A|^r."""
    if A.order == 1:
        return 1
    fam = enumerate_abelian_subgroups(A, max_generators=max(1, int(math.log2(A.order)) + 1))
    P = fam.poset()
    top = fam.index_of[A.key]
    M = P.moebius_matrix()
    value = sum(int(M[i, top]) * fam.members[i].order ** r for i in range(fam.size))
    return value


def phi_r_bruteforce(A, r: int) -> int:
    from .permcore import closure

    As = as_subgroup(A)
    U = As.parent
    idx = As.idx.tolist()
    count = 0
    comm_ok = U.commutators(As.idx, As.idx).reshape(As.order, As.order) == 0
    pos = {x: i for i, x in enumerate(idx)}
    for tup in itertools.product(idx, repeat=r):
        if not all(comm_ok[pos[a], pos[b]] for a, b in itertools.combinations(tup, 2)):
            continue
        if closure(U, tup).order == As.order:
            count += 1
    return count


# ---------------------------------------------------------------------------
# equivariant posets
# ---------------------------------------------------------------------------


class EquivariantPoset:
    """Members of a subgroup family forming an A-stable poset under inclusion."""

    def __init__(self, family: SubgroupFamily, members: Sequence[int] | None = None):
        self.family = family
        self.ids = np.array(list(range(family.size)) if members is None else list(members), dtype=np.int64)
        self.universe = family.universe
        self.leq = family.containment(self.ids.tolist())
        self._fixed: dict[int, np.ndarray] = {}
        self._chi: dict[bytes, int] = {}
        self._chi_r: dict[tuple, Fraction] = {}
        by_order: dict[int, list[int]] = {}
        for j, i in enumerate(self.ids.tolist()):
            by_order.setdefault(family.members[i].order, []).append(j)
        self._groups = [(np.array(js, dtype=np.int64),
                         np.stack([family.members[self.ids[j]].idx for j in js]))
                        for _, js in sorted(by_order.items())]

    @property
    def size(self) -> int:
        return int(self.ids.size)

    def full_mask(self) -> np.ndarray:
        return np.ones(self.size, dtype=bool)

    def fixed(self, x: int) -> np.ndarray:
        """Mask of members normalized by the element ``x``."""
        x = int(x)
        m = self._fixed.get(x)
        if m is None:
            m = np.zeros(self.size, dtype=bool)
            U = self.universe
            for js, arr in self._groups:
                conj = np.sort(U.conjugate_by(arr, x), axis=1)
                m[js] = (conj == arr).all(axis=1)
            m.setflags(write=False)
            self._fixed[x] = m
        return m

    def fixed_by(self, elements, mask: np.ndarray | None = None) -> np.ndarray:
        m = self.full_mask() if mask is None else mask.copy()
        for x in elements:
            m &= self.fixed(int(x))
        return m

    def poset(self, mask: np.ndarray | None = None) -> FinitePoset:
        if mask is None:
            return FinitePoset(self.leq, self.ids.tolist(), validate=False)
        sel = np.nonzero(mask)[0]
        return FinitePoset(self.leq[np.ix_(sel, sel)], self.ids[sel].tolist(), validate=False)

    def chi(self, mask: np.ndarray | None = None) -> int:
        if mask is None:
            mask = self.full_mask()
        key = np.packbits(mask).tobytes()
        v = self._chi.get(key)
        if v is None:
            if not mask.any():
                v = 0
            else:
                v = self.poset(mask).euler_characteristic()
            self._chi[key] = v
        return v

    # -- chi_r by the class recursion --------------------------------------

    def chi_r_recursive(self, A: SubgroupHandle, r: int, mask: np.ndarray | None = None) -> Fraction:
        if mask is None:
            mask = self.full_mask()
        return self._rec(mask, A, r)

    def _rec(self, mask: np.ndarray, A: SubgroupHandle, r: int) -> Fraction:
        if r == 0:
            return Fraction(self.chi(mask), A.order)
        key = (np.packbits(mask).tobytes(), A.key, r)
        v = self._chi_r.get(key)
        if v is not None:
            return v
        if not mask.any():
            v = Fraction(0)
        else:
            v = Fraction(0)
            data = classes_of(A)
            for x in data.representatives:
                sub = mask & self.fixed(x)
                v += self._rec(sub, centralizer(A, [x]), r - 1)
        self._chi_r[key] = v
        return v

    # -- chi_r by the abelian-subgroup sum -------------------------------------

    def chi_r_abelian(self, A: SubgroupHandle, r: int, mask: np.ndarray | None = None) -> Fraction:
        if mask is None:
            mask = self.full_mask()
        if r == 0:
            return Fraction(self.chi(mask), A.order)
        fam = enumerate_abelian_subgroups(A, r)
        total = Fraction(0)
        for c in range(fam.class_count):
            B = fam.representative(c)
            ph = phi_r(B, r)
            if ph == 0:
                continue
            total += Fraction(self.chi(self.fixed_by(B.gens, mask)) * ph, fam.normalizer_order(c))
        return total

    def chi_r(self, A, r: int, check: bool = True) -> Fraction:
        """chi_r(S, A), computed by the recursion and (with ``check``) by the abelian sum."""
        A = as_subgroup(A)
        a = self.chi_r_recursive(A, r)
        if check:
            b = self.chi_r_abelian(A, r)
            if a != b:
                raise InvariantViolation(f"chi_{r}: recursion gives {a}, abelian sum gives {b}")
        if r >= 1 and a.denominator != 1:
            raise InvariantViolation(f"chi_{r} = {a} is not an integer")
        return a

    def reduced_chi_r(self, A, r: int, check: bool = True) -> Fraction:
        A = as_subgroup(A)
        return self.chi_r(A, r, check) - Fraction(commuting_tuple_count(A, r), A.order)


def reduced_chi_r(S: EquivariantPoset, A, r: int) -> Fraction:
    return S.reduced_chi_r(A, r)


def chi_r(S: EquivariantPoset, A, r: int) -> Fraction:
    return S.chi_r(A, r)


# ---------------------------------------------------------------------------
# class functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassFunction:
    group: SubgroupHandle
    classes: ConjugacyData
    values: tuple

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.group, self.classes, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "ClassFunction":
        return ClassFunction(self.group, self.classes, tuple(Fraction(c) * v for v in self.values))

    @property
    def class_orders(self) -> tuple[int, ...]:
        return self.classes.element_orders

    def inner(self, other: "ClassFunction") -> Fraction:
        """Character inner product <f, g> (real-valued functions)."""
        return sum((Fraction(a) * Fraction(b) / c for a, b, c in
                    zip(self.values, other.values, self.classes.centralizer_orders)), Fraction(0))


def conjugation_character(G) -> ClassFunction:
    Gs = as_subgroup(G)
    data = classes_of(Gs)
    return ClassFunction(Gs, data, tuple(Fraction(c) for c in data.centralizer_orders))


def inner_product_with_conjugation_character(f: ClassFunction) -> Fraction:
    return sum((Fraction(v) for v in f.values), Fraction(0))


def euler_class_function(S: EquivariantPoset, G, r: int, reduced: bool = False) -> ClassFunction:
    """alpha_r(S, G)([x]) = chi_{r-1}(C_S(x), C_G(x)) (reduced: chi~_{r-1})."""
    if r < 1:
        raise ValueError("r must be at least 1")
    Gs = as_subgroup(G)
    data = classes_of(Gs)
    vals = []
    for x in data.representatives:
        C = centralizer(Gs, [x])
        v = S.chi_r_recursive(C, r - 1, S.fixed(x))
        if reduced:
            v -= Fraction(commuting_tuple_count(C, r - 1), C.order)
        if r >= 2 and v.denominator != 1:
            raise InvariantViolation("Euler class function value is not an integer")
        vals.append(v)
    return ClassFunction(Gs, data, tuple(vals))


# ---------------------------------------------------------------------------
# Artin coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicClass:
    generator: int
    order: int
    normalizer_order: int
    conjugacy_classes: tuple[int, ...]


def cyclic_subgroup_classes(G) -> list[CyclicClass]:
    """Conjugacy classes of cyclic subgroups, ordered by order then first element class."""
    Gs = as_subgroup(G)
    U = Gs.parent
    data = classes_of(Gs)
    seen: dict[frozenset, int] = {}
    out = []
    for ci, x in enumerate(data.representatives):
        o = data.element_orders[ci]
        gens = {data.class_index_of[int(U.power(np.array([x]), k)[0])] for k in range(1, o + 1) if math.gcd(k, o) == 1}
        key = frozenset(gens)
        if key in seen:
            continue
        seen[key] = len(out)
        C = _cyclic(U, x)
        out.append(CyclicClass(int(x), o, normalizer(Gs, C).order, tuple(sorted(gens))))
    out.sort(key=lambda c: (c.order, c.conjugacy_classes))
    return out


def _cyclic(U, x: int) -> SubgroupHandle:
    o = int(U.element_orders[x])
    pw = [0]
    for _ in range(o - 1):
        pw.append(int(U.mul(pw[-1], x)))
    return SubgroupHandle(U, pw, gens=(x,) if o > 1 else ())


@dataclass(frozen=True)
class ArtinDecomposition:
    cyclic_classes: tuple[CyclicClass, ...]
    coefficients: tuple[int, ...]
    normalizer_indices: tuple[int, ...]
    weights: tuple[int, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(c.order for c in self.cyclic_classes)

    @property
    def weighted_sum(self) -> int:
        return sum(a * w for a, w in zip(self.coefficients, self.weights))


def induced_trivial_character(G, C: CyclicClass) -> list[Fraction]:
    """1_C^G at each conjugacy class: |C_G(x)| |[x] cap C| / |C|."""
    Gs = as_subgroup(G)
    U = Gs.parent
    data = classes_of(Gs)
    Cs = _cyclic(U, C.generator)
    counts = [0] * data.count
    for y in Cs.idx.tolist():
        counts[data.class_index_of[y]] += 1
    return [Fraction(data.centralizer_orders[i] * counts[i], C.order) for i in range(data.count)]


def artin_decomposition(f: ClassFunction, p: int, degree_identity: bool = False) -> ArtinDecomposition:
    """Coefficients of ``f`` in the basis 1_C^G / |N_G(C):C| over cyclic classes.

    Checks: ``f`` is constant on rational classes and vanishes on p-singular
    classes; coefficients are integers and vanish on p-singular cyclic classes;
    the expansion reproduces ``f`` exactly; the weights are integers; with
    ``degree_identity`` the virtual degree relation sum a(C)/|N_G(C)| = 0 holds.
    """
    Gs = f.group
    data = f.classes
    cyc = cyclic_subgroup_classes(Gs)
    for C in cyc:
        vals = {f.values[i] for i in C.conjugacy_classes}
        if len(vals) != 1:
            raise InvariantViolation("class function is not constant on a rational class")
    for i, o in enumerate(data.element_orders):
        if o % p == 0 and f.values[i] != 0:
            raise InvariantViolation("class function does not vanish on a p-singular class")
    induced = [induced_trivial_character(Gs, C) for C in cyc]
    # square system: rows = rational classes (first conjugacy class), cols = cyclic classes
    rows = [C.conjugacy_classes[0] for C in cyc]
    M = [[induced[j][i] / (C.normalizer_order // C.order) for j, C in enumerate(cyc)] for i in rows]
    rhs = [Fraction(f.values[i]) for i in rows]
    sol = solve_exact(M, rhs)
    if sol is None:
        raise InvariantViolation("Artin system is singular or inconsistent")
    for a in sol:
        if a.denominator != 1:
            raise InvariantViolation(f"Artin coefficient {a} is not an integer")
    coeffs = tuple(int(a) for a in sol)
    for a, C in zip(coeffs, cyc):
        if C.order % p == 0 and a != 0:
            raise InvariantViolation("nonzero Artin coefficient on a p-singular cyclic class")
    for i in range(data.count):
        v = sum((Fraction(a) * induced[j][i] / (cyc[j].normalizer_order // cyc[j].order)
                 for j, a in enumerate(coeffs)), Fraction(0))
        if v != f.values[i]:
            raise InvariantViolation("Artin expansion does not reproduce the class function")
    weights = []
    U = Gs.parent
    for C in cyc:
        Cs = _cyclic(U, C.generator)
        s = sum(data.centralizer_orders[data.class_index_of[y]] for y in Cs.idx.tolist())
        if s % C.normalizer_order:
            raise InvariantViolation("|N_G(C)| does not divide the centralizer sum")
        weights.append((s - Gs.order) // C.normalizer_order)
    dec = ArtinDecomposition(tuple(cyc), coeffs, tuple(C.normalizer_order // C.order for C in cyc), tuple(weights))
    if degree_identity:
        if sum((Fraction(a, C.normalizer_order) for a, C in zip(coeffs, cyc)), Fraction(0)) != 0:
            raise InvariantViolation("virtual degree of the Artin expansion is not zero")
    if dec.weighted_sum != inner_product_with_conjugation_character(f):
        raise InvariantViolation("weighted Artin sum differs from the inner product")
    return dec


# ---------------------------------------------------------------------------
# Brown poset conveniences
# ---------------------------------------------------------------------------


def brown_equivariant_poset(G, p: int, full: bool = False, family: SubgroupFamily | None = None) -> EquivariantPoset:
    """The Brown poset of nonidentity p-subgroups (radical members unless ``full``)."""
    from .subgroups import enumerate_p_subgroups, filter_radical

    Gs = as_subgroup(G)
    F = family if family is not None else enumerate_p_subgroups(Gs, p)
    if not full:
        F = filter_radical(F, p)
    F = F.without_trivial()
    return EquivariantPoset(F)


def chi_r_for_subgroup(S: EquivariantPoset, G, K, p: int, r: int,
                       abelian: SubgroupFamily | None = None) -> Fraction:
    """chi~_r(S_G^{p+*}, K) via abelian p'-subgroup classes of G and S_G([A], K)."""
    Gs = as_subgroup(G)
    Ks = as_subgroup(K)
    fam = abelian if abelian is not None else enumerate_abelian_subgroups(Gs, max(r, 1), p_regular_for=p)
    total = Fraction(0)
    for c in range(fam.class_count):
        A = fam.representative(c)
        ph = phi_r(A, r)
        if ph == 0:
            continue
        count = fam.count_in(c, Ks)
        if count == 0:
            continue
        total += (S.chi(S.fixed_by(A.gens)) - 1) * ph * count
    return total / Ks.order
