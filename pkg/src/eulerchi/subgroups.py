"""Conjugation-closed families of subgroups.

A :class:`SubgroupFamily` stores every member of a family of subgroups of a
group ``G`` (dense mode), grouped into ``G``-conjugacy classes.  Families are
found by a breadth-first search on class representatives: from a
representative ``H`` the search adjoins single elements ``x`` and keeps
``<H, x>`` when it satisfies the family predicate.  Each new subgroup brings
in its whole conjugacy class.

Class ordering is deterministic: by decreasing order, then by the
lexicographically minimal member (which is also the class representative).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .config import CapExceeded, InvariantViolation, caps
from .permcore import (
    PermutationGroup,
    SubgroupHandle,
    _check_prime,
    as_subgroup,
    centralizer,
    conjugate_orbit,
    is_abelian,
    is_cyclic,
    is_p_element_mask,
    is_pi_number,
    normalizer,
    normalizes,
    p_core,
    pi_part,
    prime_divisors,
)
from .posetcat import FinitePoset, GroupActionOnPoset

# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _bounded_closure(U: PermutationGroup, H: SubgroupHandle, x: int, limit: int | None) -> SubgroupHandle | None:
    """``<H, x>``, or ``None`` once the order exceeds ``limit``."""
    mask = H.mask.copy()
    gens = np.array(sorted(set(H.gens) | {int(x)}), dtype=np.int64)
    frontier = H.idx
    count = H.order
    while frontier.size:
        prods = U.mul(frontier[:, None], gens[None, :]).ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        count += new.size
        if limit is not None and count > limit:
            return None
        frontier = new
    return SubgroupHandle(U, np.nonzero(mask)[0], gens=tuple(int(g) for g in gens))


def _pi_element_mask(U: PermutationGroup, primes: Iterable[int]) -> np.ndarray:
    primes = tuple(primes)
    o = U.element_orders.copy()
    for p in primes:
        while True:
            div = o % p == 0
            if not div.any():
                break
            o = np.where(div, o // p, o)
    return o == 1


def abelian_rank(B: SubgroupHandle) -> int:
    """Minimal number of generators of an abelian group."""
    if B.order == 1:
        return 0
    orders = B.parent.element_orders[B.idx]
    rank = 0
    for p in prime_divisors(B.order):
        omega = int(np.count_nonzero((orders == 1) | (orders == p)))
        rank = max(rank, round(math.log(omega, p)))
    return rank


def is_elementary_abelian(H: SubgroupHandle) -> bool:
    if H.order == 1:
        return True
    ps = prime_divisors(H.order)
    if len(ps) != 1:
        return False
    orders = H.parent.element_orders[H.idx]
    return bool(np.all((orders == 1) | (orders == ps[0]))) and is_abelian(H)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


class SubgroupFamily:
    """All members of a conjugation-closed family of subgroups of ``group``."""

    def __init__(self, group: SubgroupHandle, classes: Sequence[Sequence[SubgroupHandle]], kind: str):
        self.group = as_subgroup(group)
        self.kind = kind
        ordered = []
        for cls in classes:
            members = sorted(cls, key=lambda H: tuple(H.idx.tolist()))
            ordered.append(members)
        ordered.sort(key=lambda c: (-c[0].order, tuple(c[0].idx.tolist())))
        self.members: list[SubgroupHandle] = [H for c in ordered for H in c]
        self.class_of = np.array([ci for ci, c in enumerate(ordered) for _ in c], dtype=np.int64)
        starts = np.cumsum([0] + [len(c) for c in ordered])
        self.class_slices = [slice(int(starts[i]), int(starts[i + 1])) for i in range(len(ordered))]
        self.index_of = {H.key: i for i, H in enumerate(self.members)}

    # -- basic data ---------------------------------------------------------

    @property
    def universe(self) -> PermutationGroup:
        return self.group.parent

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def class_count(self) -> int:
        return len(self.class_slices)

    @property
    def class_representatives(self) -> list[int]:
        return [s.start for s in self.class_slices]

    def representative(self, c: int) -> SubgroupHandle:
        return self.members[self.class_slices[c].start]

    def class_members(self, c: int) -> list[SubgroupHandle]:
        return self.members[self.class_slices[c]]

    @property
    def class_lengths(self) -> list[int]:
        return [s.stop - s.start for s in self.class_slices]

    @property
    def class_orders(self) -> list[int]:
        return [self.representative(c).order for c in range(self.class_count)]

    def normalizer_order(self, c: int) -> int:
        return self.group.order // self.class_lengths[c]

    def class_of_subgroup(self, H: SubgroupHandle) -> int:
        return int(self.class_of[self.index_of[H.key]])

    def __contains__(self, H: SubgroupHandle) -> bool:
        return H.key in self.index_of

    def __len__(self) -> int:
        return self.size

    # -- vectorized member data --------------------------------------------

    @cached_property
    def _class_arrays(self) -> list[np.ndarray]:
        return [np.stack([H.idx for H in self.class_members(c)]) for c in range(self.class_count)]

    def class_array(self, c: int) -> np.ndarray:
        """Members of class ``c`` as rows of sorted element indices."""
        return self._class_arrays[c]

    def incidence(self, members: Sequence[int] | None = None) -> csr_matrix:
        """Sparse 0/1 matrix (members x universe elements)."""
        ids = range(self.size) if members is None else members
        rows, cols = [], []
        for r, i in enumerate(ids):
            idx = self.members[i].idx
            rows.append(np.full(idx.size, r, dtype=np.int64))
            cols.append(idx)
        n = len(rows)
        if n == 0:
            return csr_matrix((0, self.universe.order), dtype=np.int32)
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        return csr_matrix((np.ones(r.size, dtype=np.int32), (r, c)), shape=(n, self.universe.order))

    def containment(self, members: Sequence[int] | None = None) -> np.ndarray:
        """``leq[i, j]`` iff member ``i`` is contained in member ``j``."""
        ids = list(range(self.size)) if members is None else list(members)
        if not ids:
            return np.zeros((0, 0), dtype=bool)
        B = self.incidence(ids)
        inter = (B @ B.T).toarray()
        sizes = np.array([self.members[i].order for i in ids])
        return inter == sizes[:, None]

    def poset(self, members: Sequence[int] | None = None) -> FinitePoset:
        ids = list(range(self.size)) if members is None else list(members)
        return FinitePoset(self.containment(ids), ids, validate=False)

    # -- subfamilies --------------------------------------------------------

    def restrict_classes(self, keep: Sequence[int], kind: str | None = None) -> "SubgroupFamily":
        keep = sorted(set(int(c) for c in keep))
        return SubgroupFamily(self.group, [self.class_members(c) for c in keep], kind or self.kind)

    def without_trivial(self) -> "SubgroupFamily":
        return self.restrict_classes([c for c in range(self.class_count) if self.representative(c).order > 1],
                                     self.kind + "+*")

    # -- class tables -------------------------------------------------------

    def count_in(self, c: int, K: SubgroupHandle) -> int:
        """Number of members of class ``c`` contained in ``K``  (S([H], K))."""
        arr = self.class_array(c)
        if arr.shape[1] > K.order or K.order % arr.shape[1]:
            return 0
        return int(K.mask[arr].all(axis=1).sum())

    def count_containing(self, H: SubgroupHandle, c: int) -> int:
        """Number of members of class ``c`` containing ``H``  (S(H, [K]))."""
        arr = self.class_array(c)
        if arr.shape[1] < H.order or arr.shape[1] % H.order:
            return 0
        ok = np.ones(arr.shape[0], dtype=bool)
        for h in H.gens:
            ok &= (arr == h).any(axis=1)
        return int(ok.sum())

    def class_table(self, mode: str = "successors") -> np.ndarray:
        """``S(H,[K])`` (successors) or ``S([H],K)`` (predecessors), rows H, columns K.

        Both tables are computed by direct counts and checked against the
        relation S(H,[K]) |N(K)| = S([H],K) |N(H)|.
        """
        if mode not in ("successors", "predecessors"):
            raise ValueError(mode)
        n = self.class_count
        succ = np.zeros((n, n), dtype=np.int64)
        pred = np.zeros((n, n), dtype=np.int64)
        for k in range(n):
            K = self.representative(k)
            for h in range(n):
                pred[h, k] = self.count_in(h, K)
        for h in range(n):
            H = self.representative(h)
            for k in range(n):
                succ[h, k] = self.count_containing(H, k)
        for h in range(n):
            for k in range(n):
                if succ[h, k] * self.normalizer_order(k) != pred[h, k] * self.normalizer_order(h):
                    raise InvariantViolation("class table relation fails")
        return succ if mode == "successors" else pred

    # -- actions ------------------------------------------------------------

    def conjugation_map(self, g: int, members: Sequence[int] | None = None) -> np.ndarray:
        """Index map ``i -> index of members[i]^g`` inside ``members``."""
        U = self.universe
        ids = list(range(self.size)) if members is None else list(members)
        pos = {m: j for j, m in enumerate(ids)}
        out = np.empty(len(ids), dtype=np.int64)
        for j, i in enumerate(ids):
            H = self.members[i]
            img = SubgroupHandle(U, U.conjugate_by(H.idx, g)).key
            k = self.index_of.get(img)
            if k is None or k not in pos:
                raise ValueError("family is not closed under this conjugation")
            out[j] = pos[k]
        return out

    def normalized_by(self, elements: Iterable[int], members: Sequence[int] | None = None) -> list[int]:
        """Members ``H`` (among ``members``) with ``H^a = H`` for all given ``a``."""
        U = self.universe
        ids = list(range(self.size)) if members is None else list(members)
        elements = [int(a) for a in elements]
        if not elements:
            return ids
        keep = []
        for i in ids:
            H = self.members[i]
            if all(normalizes(U, a, H) for a in elements):
                keep.append(i)
        return keep

    def to_json(self) -> str:
        doc = []
        for c in range(self.class_count):
            H = self.representative(c)
            doc.append({
                "class": c,
                "order": H.order,
                "length": self.class_lengths[c],
                "generators": [str(g) for g in H.generators()],
            })
        return json.dumps({"kind": self.kind, "classes": doc}, sort_keys=True)


def _search(G: SubgroupHandle, kind: str,
            candidates: Callable[[SubgroupHandle, SubgroupHandle], np.ndarray],
            accept: Callable[[SubgroupHandle], bool],
            limit: int | None = None) -> SubgroupFamily:
    """Breadth-first search over class representatives (see module docstring)."""
    U = G.parent
    cap = caps().family
    seen: dict[bytes, int] = {}
    classes: list[list[SubgroupHandle]] = []
    total = 0
    queue: deque[SubgroupHandle] = deque()

    def register(K: SubgroupHandle) -> None:
        nonlocal total
        orbit = conjugate_orbit(G, K)
        total += len(orbit)
        if total > cap:
            raise CapExceeded(f"subgroup family exceeds the cap of {cap} members")
        for M in orbit:
            seen[M.key] = len(classes)
        classes.append(orbit)
        queue.append(K)

    register(U.trivial())
    orders = U.element_orders
    while queue:
        H = queue.popleft()
        N = normalizer(G, H)
        todo = candidates(H, N)
        todo &= ~H.mask
        while True:
            nz = np.flatnonzero(todo)
            if nz.size == 0:
                break
            x = int(nz[0])
            o = int(orders[x])
            pows = U.power(np.array([x]), 1)
            ks = [k for k in range(1, o) if math.gcd(k, o) == 1]
            xs = np.concatenate([U.power(np.array([x]), k) for k in ks]) if ks else pows
            orb = np.unique(np.concatenate([U.conjugates_of(int(y), N.idx) for y in xs]))
            marked = U.mul(H.idx[:, None], orb[None, :]).ravel()
            todo[marked] = False
            todo[x] = False
            K = _bounded_closure(U, H, x, limit)
            if K is None or K.key in seen or not accept(K):
                continue
            register(K)
    return SubgroupFamily(G, classes, kind)


def enumerate_p_subgroups(G, p: int) -> SubgroupFamily:
    """All p-subgroups of ``G`` (including the trivial subgroup)."""
    _check_prime(p)
    Gs = as_subgroup(G)
    U = Gs.parent
    pmask = is_p_element_mask(U, p)

    def candidates(H: SubgroupHandle, N: SubgroupHandle) -> np.ndarray:
        m = np.zeros(U.order, dtype=bool)
        cand = N.idx[pmask[N.idx]]
        # only elements whose p-th power already lies in H
        pw = U.power(cand, p)
        m[cand[H.mask[pw]]] = True
        return m

    fam = _search(Gs, f"{p}", candidates, lambda K: True)
    for c in range(fam.class_count):
        o = fam.representative(c).order
        if prime_divisors(o) not in ([], [p]):
            raise InvariantViolation("non-p-subgroup in p-subgroup family")
    return fam


def enumerate_pi_subgroups(G, primes: Iterable[int]) -> SubgroupFamily:
    """All subgroups of ``G`` whose order involves only primes from ``primes``."""
    primes = tuple(sorted(set(int(p) for p in primes)))
    if not primes:
        raise ValueError("the set of primes must be nonempty")
    for p in primes:
        _check_prime(p)
    Gs = as_subgroup(G)
    U = Gs.parent
    pimask = _pi_element_mask(U, primes)
    gmask = Gs.mask
    limit = pi_part(Gs.order, primes)

    def candidates(H: SubgroupHandle, N: SubgroupHandle) -> np.ndarray:
        return pimask & gmask

    return _search(Gs, "pi:" + ",".join(map(str, primes)), candidates,
                   lambda K: is_pi_number(K.order, primes), limit)


def enumerate_abelian_subgroups(G, max_generators: int, p_regular_for: int | None = None) -> SubgroupFamily:
    """Abelian subgroups generated by at most ``max_generators`` elements.

    With ``p_regular_for = p`` only subgroups of order prime to ``p`` are kept.
    """
    if max_generators < 1:
        raise ValueError("max_generators must be at least 1")
    Gs = as_subgroup(G)
    U = Gs.parent
    allowed = Gs.mask.copy()
    if p_regular_for is not None:
        _check_prime(p_regular_for)
        allowed &= U.element_orders % p_regular_for != 0

    def candidates(H: SubgroupHandle, N: SubgroupHandle) -> np.ndarray:
        C = centralizer(Gs, H) if H.order > 1 else Gs
        m = np.zeros(U.order, dtype=bool)
        m[C.idx] = True
        return m & allowed

    kind = f"abelian<={max_generators}" + (f",{p_regular_for}'" if p_regular_for else "")
    return _search(Gs, kind, candidates, lambda K: abelian_rank(K) <= max_generators)


# ---------------------------------------------------------------------------
# filters
# ---------------------------------------------------------------------------


def _family_prime(F: SubgroupFamily) -> int:
    try:
        return int(F.kind.split("+")[0])
    except ValueError as exc:  # pragma: no cover - defensive
        raise ValueError("not a p-subgroup family") from exc


def is_radical(G, H: SubgroupHandle, p: int) -> bool:
    """``H = O_p(N_G(H))``."""
    N = normalizer(G, H)
    return p_core(N, p) == H


def filter_radical(F: SubgroupFamily, p: int | None = None) -> SubgroupFamily:
    p = _family_prime(F) if p is None else p
    keep = [c for c in range(F.class_count) if is_radical(F.group, F.representative(c), p)]
    return F.restrict_classes(keep, F.kind + "+rad")


def filter_elementary_abelian(F: SubgroupFamily) -> SubgroupFamily:
    keep = [c for c in range(F.class_count) if is_elementary_abelian(F.representative(c))]
    return F.restrict_classes(keep, F.kind + "+eab")


def filter_cyclic(F: SubgroupFamily) -> SubgroupFamily:
    keep = [c for c in range(F.class_count) if is_cyclic(F.representative(c))]
    return F.restrict_classes(keep, F.kind + "+cyc")


def class_table(F: SubgroupFamily, mode: str = "successors") -> np.ndarray:
    return F.class_table(mode)


# ---------------------------------------------------------------------------
# group pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupPair:
    """A group ``G`` with an acting group ``A`` normalizing it, inside one ambient group."""

    ambient: PermutationGroup
    G: SubgroupHandle
    A: SubgroupHandle

    def __post_init__(self):
        for a in self.A.gens:
            if not normalizes(self.ambient, a, self.G):
                raise ValueError("A does not normalize G")

    @classmethod
    def from_generators(cls, degree: int, g_gens, a_gens) -> "GroupPair":
        U = PermutationGroup(degree, list(g_gens) + list(a_gens))
        from .permcore import subgroup_from_generators

        return cls(U, subgroup_from_generators(U, list(g_gens)), subgroup_from_generators(U, list(a_gens)))

    @classmethod
    def conjugation(cls, G) -> "GroupPair":
        Gs = as_subgroup(G)
        return cls(Gs.parent, Gs, Gs)

    @classmethod
    def trivial_action(cls, G) -> "GroupPair":
        Gs = as_subgroup(G)
        return cls(Gs.parent, Gs, Gs.parent.trivial())

    @cached_property
    def centralizer_in_G(self) -> SubgroupHandle:
        """C_G(A)."""
        return centralizer(self.G, self.A)

    @property
    def is_inner(self) -> bool:
        return self.A.issubset(self.G)


def centralized_members(pair: GroupPair, F: SubgroupFamily, members: Sequence[int] | None = None) -> list[int]:
    return F.normalized_by(pair.A.gens, members)


def centralized_subposet(pair: GroupPair, F: SubgroupFamily) -> FinitePoset:
    """The A-normalized members of ``F`` ordered by inclusion."""
    return F.poset(centralized_members(pair, F))


def centralized_action(pair: GroupPair, F: SubgroupFamily) -> GroupActionOnPoset:
    """``N_G(A)`` acting by conjugation on the centralized subposet."""
    ids = centralized_members(pair, F)
    P = F.poset(ids)
    N = SubgroupHandle(pair.ambient, pair.G.idx[_normalizes_mask(pair.G, pair.A)])
    maps = [F.conjugation_map(g, ids) for g in N.gens]
    return GroupActionOnPoset(P, N.order, maps)


def _normalizes_mask(G: SubgroupHandle, A: SubgroupHandle) -> np.ndarray:
    """Mask over ``G.idx`` of the elements normalizing ``A``."""
    from .permcore import transporter_mask

    return transporter_mask(G, A, A)
