"""Finite posets, Delta-sets and finite EI-category skeletons.

Everything here is exact: poset weightings and Moebius values are integers,
category weightings are :class:`fractions.Fraction`.  Integer vectors are
handled in ``int64`` while the values provably fit, and fall back to Python
integers (``object`` arrays) otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from .config import InvariantViolation

_SAFE = 2 ** 62


def _safe_matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Exact ``M @ v`` for a 0/1 (or small integer) matrix ``M``."""
    if v.dtype != object:
        bound = int(np.abs(v).max(initial=0)) * max(1, M.shape[-1]) * max(1, int(np.abs(M).max(initial=0)))
        if bound < _SAFE:
            return M.astype(np.int64) @ v
        v = v.astype(object)
    return M.astype(np.int64).astype(object) @ v


def _shrink(v: np.ndarray) -> np.ndarray:
    """Convert an object array back to int64 when possible."""
    if v.dtype == object and v.size and max(abs(int(x)) for x in v) < 2 ** 60:
        return v.astype(np.int64)
    return v


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def _to_fraction_rows(M) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in M]


def solve_exact(M, b) -> list[Fraction] | None:
    """A solution of ``M x = b`` over the rationals, or ``None`` if inconsistent.

    Triangular systems are solved by substitution, other systems by
    Gauss--Jordan elimination over the rationals.
    Free variables, if any, are set to zero.
    """
    A = _to_fraction_rows(M)
    rhs = [Fraction(x) for x in b]
    n = len(A)
    m = len(A[0]) if n else 0
    if n == m and n > 0:
        if all(A[i][j] == 0 for i in range(n) for j in range(i)) and all(A[i][i] != 0 for i in range(n)):
            x = [Fraction(0)] * n
            for i in range(n - 1, -1, -1):
                s = rhs[i] - sum((A[i][j] * x[j] for j in range(i + 1, n) if A[i][j]), Fraction(0))
                x[i] = s / A[i][i]
            return x
        if all(A[i][j] == 0 for i in range(n) for j in range(i + 1, n)) and all(A[i][i] != 0 for i in range(n)):
            x = [Fraction(0)] * n
            for i in range(n):
                s = rhs[i] - sum((A[i][j] * x[j] for j in range(i) if A[i][j]), Fraction(0))
                x[i] = s / A[i][i]
            return x
    return _gauss_solve(A, rhs, m)


def _gauss_solve(A: list[list[Fraction]], rhs: list[Fraction], m: int) -> list[Fraction] | None:
    rows = [row[:] + [r] for row, r in zip(A, rhs)]
    n = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        inv = 1 / pr[c]
        for j in range(c, m + 1):
            pr[j] *= inv
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri = rows[i]
                for j in range(c, m + 1):
                    if pr[j]:
                        ri[j] -= f * pr[j]
        pivots.append(c)
        r += 1
        if r == n:
            break
    if any(rows[i][m] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        x[c] = rows[i][m]
    return x


# ---------------------------------------------------------------------------
# posets
# ---------------------------------------------------------------------------


class FinitePoset:
    """A finite poset on ``range(n)`` given by its (reflexive) order matrix.

    ``leq[i, j]`` is true iff ``i <= j``.
    """

    def __init__(self, leq: np.ndarray, labels: Sequence[Hashable] | None = None, validate: bool | None = None):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValueError("order matrix must be square")
        self.leq = leq
        self.leq.setflags(write=False)
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise ValueError("label count does not match poset size")
        if validate is None:
            validate = n <= 400
        if validate:
            self._validate()

    def _validate(self) -> None:
        L = self.leq
        n = self.size
        if not np.all(np.diag(L)):
            raise ValueError("order relation is not reflexive")
        if np.any(L & L.T & ~np.eye(n, dtype=bool)):
            raise ValueError("order relation is not antisymmetric")
        Li = L.astype(np.int64)
        if np.any(((Li @ Li) > 0) & ~L):
            raise ValueError("order relation is not transitive")

    @classmethod
    def from_relation(cls, labels: Sequence[Hashable], le: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        n = len(labels)
        L = np.array([[le(a, b) for b in labels] for a in labels], dtype=bool).reshape(n, n)
        return cls(L, labels)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def antichain(cls, n: int) -> "FinitePoset":
        return cls(np.eye(n, dtype=bool))

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __len__(self) -> int:
        return self.size

    @property
    def strict(self) -> np.ndarray:
        return self.leq & ~np.eye(self.size, dtype=bool)

    def subposet(self, keep) -> "FinitePoset":
        keep = np.asarray(keep)
        if keep.dtype == bool:
            keep = np.nonzero(keep)[0]
        return FinitePoset(self.leq[np.ix_(keep, keep)], [self.labels[i] for i in keep], validate=False)

    def levels(self) -> list[np.ndarray]:
        """Antichains ordered so that ``i < j`` puts ``i`` in an earlier level.

        Elements are grouped by the size of their down-set, which strictly
        increases along the order.
        """
        if self.size == 0:
            return []
        down = self.leq.sum(axis=0)
        out = []
        for v in np.unique(down):
            out.append(np.nonzero(down == v)[0])
        return out

    def is_left_ideal(self, members) -> bool:
        """Upward closed (the convention for "left ideal" used here)."""
        m = np.zeros(self.size, dtype=bool)
        m[np.asarray(members, dtype=np.int64)] = True
        return not np.any(self.leq[m][:, ~m])

    def is_right_ideal(self, members) -> bool:
        m = np.zeros(self.size, dtype=bool)
        m[np.asarray(members, dtype=np.int64)] = True
        return not np.any(self.leq[~m][:, m])

    # -- Moebius function and weightings -----------------------------------

    def weighting_values(self) -> np.ndarray:
        """Integer k with sum_{t >= s} k(t) = 1 for all s."""
        n = self.size
        k = np.zeros(n, dtype=np.int64)
        S = self.strict
        for lev in reversed(self.levels()):
            contrib = _safe_matvec(S[lev], k)
            if contrib.dtype == object:
                k = k.astype(object)
            k[lev] = 1 - contrib
        return k

    def coweighting_values(self) -> np.ndarray:
        """Integer k with sum_{s <= t} k(s) = 1 for all t."""
        n = self.size
        k = np.zeros(n, dtype=np.int64)
        S = self.strict.T
        for lev in self.levels():
            contrib = _safe_matvec(S[lev], k)
            if contrib.dtype == object:
                k = k.astype(object)
            k[lev] = 1 - contrib
        return k

    def moebius_matrix(self) -> np.ndarray:
        """The integer inverse of the zeta matrix."""
        n = self.size
        M = np.zeros((n, n), dtype=object)
        S = self.strict.astype(np.int64).astype(object)
        for lev in self.levels():
            # mu(x, y) = delta(x, y) - sum_{z < y} mu(x, z)
            block = M @ S[:, lev]
            M[:, lev] = -block
            M[lev, lev] = 1
        return _shrink_matrix(M)

    def zeta_matrix(self) -> np.ndarray:
        return self.leq.astype(np.int64)

    def weighting(self) -> "RationalWeighting":
        return RationalWeighting(tuple(Fraction(int(x)) for x in self.weighting_values()), "weighting")

    def coweighting(self) -> "RationalWeighting":
        return RationalWeighting(tuple(Fraction(int(x)) for x in self.coweighting_values()), "coweighting")

    def euler_characteristic(self) -> int:
        """Sum of the weighting; checked against the coweighting sum."""
        w = int(sum(int(x) for x in self.weighting_values()))
        c = int(sum(int(x) for x in self.coweighting_values()))
        if w != c:
            raise InvariantViolation(f"weighting sum {w} differs from coweighting sum {c}")
        return w

    def reduced_euler_characteristic(self) -> int:
        return self.euler_characteristic() - 1

    # -- chains ---------------------------------------------------------------

    def chain_counts(self) -> list[int]:
        """Number of chains with d+1 elements, for d = 0, 1, ..."""
        n = self.size
        if n == 0:
            return []
        S = self.strict
        c = np.ones(n, dtype=np.int64)
        out = []
        while True:
            total = int(sum(int(x) for x in c))
            if total == 0:
                break
            out.append(total)
            c = _safe_matvec(S, c)
        return out

    def euler_characteristic_via_chains(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.chain_counts()))

    def chains(self) -> list[tuple[int, ...]]:
        """All nonempty chains, each listed bottom-up."""
        S = self.strict
        up = [np.nonzero(S[i])[0].tolist() for i in range(self.size)]
        out: list[tuple[int, ...]] = []

        def extend(ch: tuple[int, ...]) -> None:
            out.append(ch)
            for j in up[ch[-1]]:
                extend(ch + (j,))

        for i in range(self.size):
            extend((i,))
        return out

    def subdivision(self) -> "FinitePoset":
        """Poset of nonempty chains ordered by inclusion."""
        chains = self.chains()
        chains.sort(key=lambda c: (len(c), c))
        sets = [frozenset(c) for c in chains]
        n = len(chains)
        L = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                L[i, j] = a <= b
        return FinitePoset(L, chains, validate=False)

    def delta_set(self) -> "DeltaSet":
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for c in self.chains():
            by_dim.setdefault(len(c) - 1, []).append(c)
        return DeltaSet({d: sorted(v) for d, v in sorted(by_dim.items())})

    # -- serialization ------------------------------------------------------

    def covers(self) -> list[tuple[int, int]]:
        S = self.strict.astype(np.int64)
        two = (S @ S) > 0
        cov = self.strict & ~two
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]

    def to_json(self, weights: Sequence[Fraction] | None = None) -> str:
        doc: dict = {"labels": [str(l) for l in self.labels], "covers": self.covers()}
        if weights is not None:
            doc["weights"] = [format_fraction(w) for w in weights]
        return json.dumps(doc, sort_keys=True)


def _shrink_matrix(M: np.ndarray) -> np.ndarray:
    if M.size == 0:
        return M.astype(np.int64)
    if max(abs(int(x)) for x in M.ravel()) < 2 ** 60:
        return M.astype(np.int64)
    return M


def format_fraction(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalWeighting:
    values: tuple[Fraction, ...]
    kind: str

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))


@dataclass(frozen=True)
class DeltaSet:
    simplices_by_dim: dict

    def counts(self) -> tuple[int, ...]:
        return tuple(len(v) for _, v in sorted(self.simplices_by_dim.items()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts()))


def euler_characteristic_via_chains(P: FinitePoset) -> int:
    return P.euler_characteristic_via_chains()


def moebius_matrix(P: FinitePoset) -> np.ndarray:
    return P.moebius_matrix()


def subdivision(P: FinitePoset) -> FinitePoset:
    return P.subdivision()


def delta_set(P: FinitePoset) -> DeltaSet:
    return P.delta_set()


# ---------------------------------------------------------------------------
# categories
# ---------------------------------------------------------------------------


class EulerUndefined(ArithmeticError):
    """Neither a weighting nor a coweighting exists."""


@dataclass
class CategorySkeleton:
    """Objects up to isomorphism with hom-set cardinalities ``hom[a][b] = |Hom(a, b)|``."""

    labels: list
    hom: list[list[int]]
    validate: bool = True

    def __post_init__(self):
        n = len(self.labels)
        if len(self.hom) != n or any(len(r) != n for r in self.hom):
            raise ValueError("hom matrix must be square and match the labels")
        if self.validate:
            for a in range(n):
                if self.hom[a][a] < 1:
                    raise ValueError("every object needs an identity")
                for b in range(a + 1, n):
                    if self.hom[a][b] > 0 and self.hom[b][a] > 0:
                        raise ValueError("isomorphic objects must be merged in a skeleton of an EI-category")

    @property
    def object_count(self) -> int:
        return len(self.labels)

    def weighting(self) -> RationalWeighting | None:
        sol = solve_exact(self.hom, [1] * self.object_count)
        return None if sol is None else RationalWeighting(tuple(sol), "weighting")

    def coweighting(self) -> RationalWeighting | None:
        n = self.object_count
        T = [[self.hom[a][b] for a in range(n)] for b in range(n)]
        sol = solve_exact(T, [1] * n)
        return None if sol is None else RationalWeighting(tuple(sol), "coweighting")

    def euler_characteristic(self) -> Fraction:
        if self.object_count == 0:
            return Fraction(0)
        w = self.weighting()
        c = self.coweighting()
        if w is None and c is None:
            raise EulerUndefined("Euler characteristic undefined for this category")
        if w is not None and c is not None and w.total != c.total:
            raise InvariantViolation("weighting and coweighting sums differ")
        return (w or c).total


def weighting(x, kind: str = "weighting") -> RationalWeighting | None:
    if kind not in ("weighting", "coweighting"):
        raise ValueError(kind)
    if isinstance(x, FinitePoset):
        return x.weighting() if kind == "weighting" else x.coweighting()
    return x.weighting() if kind == "weighting" else x.coweighting()


def euler_characteristic(x) -> Fraction:
    if isinstance(x, FinitePoset):
        return Fraction(x.euler_characteristic())
    return x.euler_characteristic()


# ---------------------------------------------------------------------------
# group actions on posets
# ---------------------------------------------------------------------------


@dataclass
class GroupActionOnPoset:
    """An action of a finite group on a poset by order automorphisms.

    ``generator_maps`` are index maps for a generating set; ``classes`` lists
    ``(map, class_size)`` pairs for the conjugacy classes of the acting group
    (used by the Cauchy--Frobenius count); ``order`` is the group order.
    """

    poset: FinitePoset
    order: int
    generator_maps: list
    classes: list = field(default_factory=list)

    def validate(self) -> None:
        L = self.poset.leq
        for mp in self.generator_maps:
            if sorted(mp.tolist()) != list(range(self.poset.size)):
                raise ValueError("action map is not a bijection")
            if not np.array_equal(L, L[np.ix_(mp, mp)]):
                raise ValueError("action does not preserve the order")

    def orbits(self) -> np.ndarray:
        n = self.poset.size
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for mp in self.generator_maps:
            for i, j in enumerate(mp.tolist()):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        roots = [find(i) for i in range(n)]
        relabel: dict[int, int] = {}
        out = np.empty(n, dtype=np.int64)
        for i, r in enumerate(roots):
            out[i] = relabel.setdefault(r, len(relabel))
        return out


def _simplex_orbit_counts(action: GroupActionOnPoset) -> list[int]:
    P = action.poset
    by_dim: dict[int, set] = {}
    levels = P.levels()
    rank = np.empty(P.size, dtype=np.int64)
    for r, lev in enumerate(levels):
        rank[lev] = r
    chains = P.chains()
    index = {c: i for i, c in enumerate(chains)}
    parent = list(range(len(chains)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mp in action.generator_maps:
        for c, i in index.items():
            img = tuple(sorted((int(mp[v]) for v in c), key=lambda v: (rank[v], v)))
            j = index[img]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    for c, i in index.items():
        by_dim.setdefault(len(c) - 1, set()).add(find(i))
    return [len(by_dim[d]) for d in sorted(by_dim)]


def quotient_delta_counts(action: GroupActionOnPoset) -> list[int]:
    """Number of orbits of d-simplices, d = 0, 1, ..."""
    return _simplex_orbit_counts(action)


def quotient_delta_euler(action: GroupActionOnPoset) -> int:
    """chi(Delta(P)/A) by orbit enumeration, checked by Cauchy--Frobenius."""
    counts = _simplex_orbit_counts(action)
    direct = sum((-1) ** d * c for d, c in enumerate(counts))
    if action.classes:
        P = action.poset
        total = Fraction(0)
        for mp, size in action.classes:
            fixed = np.nonzero(np.asarray(mp) == np.arange(P.size))[0]
            total += size * P.subposet(fixed).euler_characteristic()
        avg = total / action.order
        if avg != direct:
            raise InvariantViolation(f"orbit Delta-set chi {direct} != Cauchy-Frobenius average {avg}")
    return direct


def subdivision_orbit_euler(action: GroupActionOnPoset) -> int:
    """chi(sd(P)/A) computed on the orbit poset of the subdivision (cross-check path)."""
    P = action.poset
    sdP = P.subdivision()
    chain_index = {c: i for i, c in enumerate(sdP.labels)}
    levels = P.levels()
    rank = np.empty(P.size, dtype=np.int64)
    for r, lev in enumerate(levels):
        rank[lev] = r
    maps = []
    for mp in action.generator_maps:
        m = np.empty(sdP.size, dtype=np.int64)
        for c, i in chain_index.items():
            m[i] = chain_index[tuple(sorted((int(mp[v]) for v in c), key=lambda v: (rank[v], v)))]
        maps.append(m)
    sd_action = GroupActionOnPoset(sdP, action.order, maps)
    return orbit_poset(sd_action)[0].euler_characteristic()


def orbit_poset(action: GroupActionOnPoset) -> tuple[FinitePoset, np.ndarray, np.ndarray]:
    """The orbit poset P/A with its weighting in the sense of successor counts.

    Returns ``(Q, orbit_of, k)`` where ``orbit_of[s]`` is the orbit of element
    ``s`` and ``k`` solves ``sum_y S(s, y) k[y] = 1`` with ``S(s, y)`` the
    number of successors of ``s`` in the orbit ``y``.  The pulled-back
    ``k[orbit_of]`` is checked against the element-level weighting.
    """
    P = action.poset
    orb = action.orbits()
    m = int(orb.max()) + 1 if orb.size else 0
    onehot = np.zeros((P.size, m), dtype=np.int64)
    onehot[np.arange(P.size), orb] = 1
    succ = P.leq.astype(np.int64) @ onehot  # succ[s, y] = S(s, y)
    reps = [int(np.nonzero(orb == y)[0][0]) for y in range(m)]
    Q_leq_orbits = np.zeros((m, m), dtype=bool)
    for x in range(m):
        Q_leq_orbits[x] = (succ[orb == x] > 0).any(axis=0)
    Q = FinitePoset(Q_leq_orbits, reps, validate=m <= 400)
    S = succ[reps]
    sol = solve_exact(S.tolist(), [1] * m)
    if sol is None:
        raise InvariantViolation("orbit weighting system is inconsistent")
    k = np.array([int(v) if v.denominator == 1 else v for v in sol], dtype=object)
    elem = P.weighting_values()
    if any(Fraction(k[orb[s]]) != int(elem[s]) for s in range(P.size)):
        raise InvariantViolation("orbit weighting does not pull back to the element weighting")
    return Q, orb, k
