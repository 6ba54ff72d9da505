"""Dense permutation-group engine.

Every group is fully enumerated.  Elements of a group are stored as rows of an
integer array (0-based images), sorted lexicographically, so that the identity
has index 0 and "lexicographically minimal" means "smallest index".  All other
objects (subgroups, classes, cosets) are index arrays into this table.

Permutations act on the right: ``x^(gh) = (x^g)^h``, so the product ``g*h``
first applies ``g`` and then ``h``; conjugation is ``x^g = g^-1 x g``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .config import CapExceeded, InvariantViolation, caps

# ---------------------------------------------------------------------------
# single permutations
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection of {1..degree}, stored 0-based."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        self.images = imgs

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as ``(1,2,3)(4,5)``; fixed points may be omitted."""
        text = text.strip()
        imgs = list(range(degree))
        stripped = _CYCLE_RE.sub("", text)
        if stripped.strip():
            raise ValueError(f"cannot parse cycle notation {text!r}")
        seen: set[int] = set()
        for body in _CYCLE_RE.findall(text):
            body = body.strip()
            if not body:
                continue
            pts = [int(tok) for tok in re.split(r"[,\s]+", body) if tok]
            for pt in pts:
                if not 1 <= pt <= degree:
                    raise ValueError(f"point {pt} outside 1..{degree}")
                if pt in seen:
                    raise ValueError(f"point {pt} repeated in {text!r}")
                seen.add(pt)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                imgs[a - 1] = b - 1
        return cls(imgs)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(o[i] for i in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def order(self) -> int:
        n = 1
        for c in self.cycles():
            n = n * len(c) // math.gcd(n, len(c))
        return n

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x + 1)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)

    __repr__ = __str__

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)


def parse_generators(text: str, degree: int) -> list[Permutation]:
    """Parse ``"(1,2,3)(4,5);(1,2)"`` into permutations of the given degree."""
    gens = []
    for chunk in text.split(";"):
        if chunk.strip():
            gens.append(Permutation.from_cycles(chunk, degree))
    return gens


# ---------------------------------------------------------------------------
# small integer helpers
# ---------------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n == 0:
        raise ValueError("p-part of 0 is undefined")
    n = abs(n)
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def pi_part(n: int, primes: Iterable[int]) -> int:
    q = 1
    for p in primes:
        q *= p_part(n, p)
    return q


def is_pi_number(n: int, primes: Iterable[int]) -> bool:
    return pi_part(n, primes) == n


# ---------------------------------------------------------------------------
# enumerated groups
# ---------------------------------------------------------------------------


def _compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product "a then b"; either argument may be a single row."""
    if b.ndim == 1:
        return b[a]
    if a.ndim == 1:
        return b[:, a]
    return np.take_along_axis(b, a, axis=1)


class PermutationGroup:
    """A fully enumerated permutation group (the "universe" for subgroup handles)."""

    def __init__(self, degree: int, generators: Sequence[Permutation], name: str | None = None,
                 element_cap: int | None = None):
        if degree < 1:
            raise ValueError("degree must be positive")
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name
        cap = caps().elements if element_cap is None else element_cap
        self._E = self._enumerate(cap)
        self.order = int(self._E.shape[0])
        self._build_lookup()

    # -- construction -------------------------------------------------------

    def _enumerate(self, cap: int) -> np.ndarray:
        d = self.degree
        dtype = np.int16 if d < 32000 else np.int32
        ident = np.arange(d, dtype=dtype)
        gens = [np.array(g.images, dtype=dtype) for g in self.generators if not g.is_identity()]
        seen = {ident.tobytes()}
        rows = [ident]
        frontier = ident[None, :]
        while frontier.shape[0] and gens:
            cand = np.concatenate([_compose_rows(frontier, g) for g in gens])
            new = []
            for r in cand:
                key = r.tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(r)
            if len(seen) > cap:
                raise CapExceeded(f"group too large for dense mode (> {cap} elements)")
            frontier = np.array(new, dtype=dtype).reshape(-1, d)
            rows.extend(new)
        E = np.array(rows, dtype=dtype).reshape(-1, d)
        order = np.lexsort(E.T[::-1])
        E = E[order]
        E.setflags(write=False)
        return E

    def _build_lookup(self) -> None:
        E = self._E
        # A base: points whose images determine a group element uniquely.
        sel = np.arange(self.order)
        base: list[int] = []
        while sel.size > 1:
            sub = E[sel]
            moved = np.nonzero((sub != np.arange(self.degree)).any(axis=0))[0]
            b = int(moved[0])
            base.append(b)
            sel = sel[sub[:, b] == b]
        self.base = tuple(base)
        d = self.degree
        if base and len(base) * math.log2(d) > 62:
            self._keymul = None
            self._dict = {E[i].tobytes(): i for i in range(self.order)}
            return
        self._dict = None
        self._keymul = np.array([d ** i for i in range(len(base))], dtype=np.int64)
        keys = self._row_keys(E)
        self._key_order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._key_order]
        if np.any(self._sorted_keys[1:] == self._sorted_keys[:-1]):
            raise InvariantViolation("base images do not separate group elements")

    def _row_keys(self, rows: np.ndarray) -> np.ndarray:
        if not self.base:
            return np.zeros(rows.shape[0], dtype=np.int64)
        return rows[:, list(self.base)].astype(np.int64) @ self._keymul

    # -- lookup -------------------------------------------------------------

    @property
    def elements_array(self) -> np.ndarray:
        return self._E

    def index_of_rows(self, rows: np.ndarray, verify: bool = False) -> np.ndarray:
        """Indices of permutation rows known (or checked, with ``verify``) to lie in the group."""
        rows = np.asarray(rows)
        if rows.ndim == 1:
            rows = rows[None, :]
        if self._dict is not None:
            out = np.empty(rows.shape[0], dtype=np.int64)
            for i, r in enumerate(rows.astype(self._E.dtype)):
                j = self._dict.get(r.tobytes())
                if j is None:
                    raise KeyError("permutation not in group")
                out[i] = j
            return out
        keys = self._row_keys(rows)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if verify:
            if np.any(self._sorted_keys[pos] != keys):
                raise KeyError("permutation not in group")
        idx = self._key_order[pos]
        if verify and not np.array_equal(self._E[idx], rows):
            raise KeyError("permutation not in group")
        return idx

    def index(self, perm: Permutation) -> int:
        if perm.degree != self.degree:
            raise ValueError("degree mismatch")
        return int(self.index_of_rows(np.array(perm.images), verify=True)[0])

    def contains(self, perm: Permutation) -> bool:
        try:
            self.index(perm)
            return True
        except KeyError:
            return False

    def element(self, i: int) -> Permutation:
        return Permutation(self._E[int(i)].tolist())

    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(self.order)]

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index(g) for g in self.generators)

    # -- arithmetic on indices ---------------------------------------------

    @cached_property
    def inverse_rows(self) -> np.ndarray:
        inv = np.argsort(self._E, axis=1).astype(self._E.dtype)
        inv.setflags(write=False)
        return inv

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = self.index_of_rows(self.inverse_rows)
        inv.setflags(write=False)
        return inv

    def mul(self, a, b) -> np.ndarray:
        """Index array of products ``a*b`` (broadcasting over index arrays)."""
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        shape = a.shape
        rows = _compose_rows(self._E[a.ravel()], self._E[b.ravel()])
        return self.index_of_rows(rows).reshape(shape)

    def conjugate_by(self, xs, g: int) -> np.ndarray:
        """Indices of ``x^g = g^-1 x g`` for an index array ``xs``."""
        xs = np.asarray(xs)
        rows = self._E[xs.ravel()]
        ginv = self.inverse_rows[g]
        # g^-1 x g applied to point t: g(x(g^-1(t)))
        conj = self._E[g][rows[:, ginv]]
        return self.index_of_rows(conj).reshape(xs.shape)

    def conjugates_of(self, x: int, gs) -> np.ndarray:
        """Indices of ``x^g`` for every ``g`` in the index array ``gs``."""
        gs = np.asarray(gs)
        grows = self._E[gs]
        ginv = self.inverse_rows[gs]
        conj = np.take_along_axis(grows, self._E[x][ginv], axis=1)
        return self.index_of_rows(conj)

    def commutators(self, xs, ys) -> np.ndarray:
        """Indices of ``[x,y] = x^-1 y^-1 x y`` for all pairs (outer product, flattened)."""
        xs = np.asarray(xs).ravel()
        ys = np.asarray(ys).ravel()
        X = np.repeat(xs, ys.size)
        Y = np.tile(ys, xs.size)
        inv = self.inverse
        return self.mul(self.mul(inv[X], inv[Y]), self.mul(X, Y))

    def power(self, xs, k: int) -> np.ndarray:
        xs = np.asarray(xs)
        res = np.zeros_like(xs)
        base = xs.copy()
        while k:
            if k & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            k >>= 1
        return res

    @cached_property
    def element_orders(self) -> np.ndarray:
        E = self._E
        ident = np.arange(self.degree, dtype=E.dtype)
        orders = np.zeros(self.order, dtype=np.int64)
        orders[0] = 1
        cur = E.copy()
        k = 1
        todo = np.arange(1, self.order)
        cur = cur[todo]
        while todo.size:
            cur = _compose_rows(cur, E[todo])
            k += 1
            done = (cur == ident).all(axis=1)
            orders[todo[done]] = k
            todo = todo[~done]
            cur = cur[~done]
        orders.setflags(write=False)
        return orders

    @cached_property
    def conjugation_maps(self) -> tuple[np.ndarray, ...]:
        """For each generator s, the index map i -> index of s^-1 e_i s."""
        out = []
        allidx = np.arange(self.order)
        for s in self.generator_indices:
            m = self.conjugate_by(allidx, s)
            m.setflags(write=False)
            out.append(m)
        return tuple(out)

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, np.arange(self.order), gens=self.generator_indices)

    def trivial(self) -> "SubgroupHandle":
        return SubgroupHandle(self, np.zeros(1, dtype=np.int64), gens=())

    def __repr__(self) -> str:
        label = self.name or f"group of degree {self.degree}"
        return f"<PermutationGroup {label} order={self.order}>"


# ---------------------------------------------------------------------------
# subgroups
# ---------------------------------------------------------------------------


class SubgroupHandle:
    """A subgroup of an enumerated group, identified by its sorted element indices."""

    __slots__ = ("parent", "idx", "key", "_gens", "_mask", "__weakref__")

    def __init__(self, parent: PermutationGroup, idx, gens: Sequence[int] | None = None):
        arr = np.unique(np.asarray(idx, dtype=np.int64))
        arr.setflags(write=False)
        self.parent = parent
        self.idx = arr
        self.key = arr.tobytes()
        self._gens = tuple(int(g) for g in gens) if gens is not None else None
        self._mask = None

    @property
    def order(self) -> int:
        return int(self.idx.size)

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.parent.order, dtype=bool)
            m[self.idx] = True
            m.setflags(write=False)
            self._mask = m
        return self._mask

    @property
    def gens(self) -> tuple[int, ...]:
        """A small generating set (indices into the parent)."""
        if self._gens is None:
            gens: list[int] = []
            have = np.zeros(self.parent.order, dtype=bool)
            have[0] = True
            for x in self.idx:
                if not have[x]:
                    gens.append(int(x))
                    have[closure(self.parent, gens).idx] = True
            self._gens = tuple(gens)
        return self._gens

    def contains_index(self, i: int) -> bool:
        return bool(self.mask[i])

    def issubset(self, other: "SubgroupHandle") -> bool:
        return self.order <= other.order and bool(other.mask[self.idx].all())

    def elements(self) -> list[Permutation]:
        return [self.parent.element(i) for i in self.idx]

    def generators(self) -> list[Permutation]:
        return [self.parent.element(i) for i in self.gens]

    def conjugate(self, g: int) -> "SubgroupHandle":
        gens = self.parent.conjugate_by(np.array(self.gens, dtype=np.int64), g) if self.gens else ()
        return SubgroupHandle(self.parent, self.parent.conjugate_by(self.idx, g), gens=tuple(gens))

    def as_group(self, name: str | None = None) -> PermutationGroup:
        """Re-enumerate as a standalone group (same degree)."""
        return PermutationGroup(self.parent.degree, self.generators(), name=name)

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupHandle) and other.parent is self.parent and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "SubgroupHandle") -> bool:
        return tuple(self.idx) < tuple(other.idx)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators()) or "()"
        return f"<Subgroup order={self.order} gens=[{gens}]>"


GroupLike = "PermutationGroup | SubgroupHandle"


def as_subgroup(G) -> SubgroupHandle:
    if isinstance(G, SubgroupHandle):
        return G
    if isinstance(G, PermutationGroup):
        return G.whole()
    raise TypeError(f"expected a group or subgroup, got {type(G).__name__}")


def closure(U: PermutationGroup, gens: Iterable[int], start: SubgroupHandle | None = None) -> SubgroupHandle:
    """Subgroup of ``U`` generated by the given element indices (and ``start``)."""
    gens = [int(g) for g in gens]
    mask = np.zeros(U.order, dtype=bool)
    if start is not None:
        mask[start.idx] = True
        all_gens = list(start.gens) + [g for g in gens if not start.mask[g]]
        frontier = start.idx.copy()
    else:
        mask[0] = True
        all_gens = [g for g in gens if g != 0]
        frontier = np.zeros(1, dtype=np.int64)
    gens_arr = np.array(sorted(set(all_gens)), dtype=np.int64)
    if gens_arr.size == 0:
        return SubgroupHandle(U, np.nonzero(mask)[0], gens=())
    while frontier.size:
        prods = U.mul(frontier[:, None], gens_arr[None, :]).ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return SubgroupHandle(U, np.nonzero(mask)[0], gens=tuple(int(g) for g in gens_arr))


def subgroup_from_generators(U: PermutationGroup, perms: Sequence[Permutation]) -> SubgroupHandle:
    return closure(U, [U.index(p) for p in perms])


def group_from_generators(degree: int, gens: Sequence[Permutation], name: str | None = None) -> PermutationGroup:
    """Enumerate the group generated by ``gens``."""
    return PermutationGroup(degree, gens, name=name)


# ---------------------------------------------------------------------------
# matrix groups over prime fields, acting on nonzero vectors
# ---------------------------------------------------------------------------


def _primitive_root(q: int) -> int:
    for w in range(1, q):
        if all(pow(w, (q - 1) // f, q) != 1 for f in prime_divisors(q - 1)):
            return w
    return 1


def matrix_group_as_permutations(n: int, q: int, kind: str = "GL") -> PermutationGroup:
    """GL(n,q) or SL(n,q), q prime, acting on the q^n - 1 nonzero row vectors."""
    kind = kind.upper()
    if kind not in ("GL", "SL"):
        raise ValueError(f"unsupported kind {kind!r}")
    if not is_prime(q):
        raise ValueError(f"unsupported field size {q}: only prime fields are implemented")
    if q ** n - 1 > caps().elements:
        raise CapExceeded("degree overflow for the vector-space action")
    vectors = [v for v in np.ndindex(*([q] * n)) if any(v)]
    pos = {v: i for i, v in enumerate(vectors)}
    degree = len(vectors)

    def perm_of(M: np.ndarray) -> Permutation:
        return Permutation([pos[tuple(int(c) for c in (np.array(v) @ M) % q)] for v in vectors])

    mats = []
    for i in range(n):
        for j in range(n):
            if i != j:
                M = np.eye(n, dtype=np.int64)
                M[i, j] = 1
                mats.append(M)
    if kind == "GL":
        D = np.eye(n, dtype=np.int64)
        D[0, 0] = _primitive_root(q)
        mats.append(D)
    gens = [perm_of(M) for M in mats]
    gens = [g for g in gens if not g.is_identity()]
    return PermutationGroup(degree, gens, name=f"{kind}({n},{q})")


def matrix_group_order(n: int, q: int, kind: str = "GL") -> int:
    o = 1
    for i in range(n):
        o *= q ** n - q ** i
    return o if kind.upper() == "GL" else o // (q - 1)


def symmetric_group(n: int) -> PermutationGroup:
    gens = []
    if n >= 2:
        gens.append(Permutation([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(Permutation(list(range(1, n)) + [0]))
    return PermutationGroup(n, gens, name=f"S{n}")


def alternating_group(n: int) -> PermutationGroup:
    gens = []
    for k in range(2, n):
        # 3-cycles (1,2,k+1)
        imgs = list(range(n))
        imgs[0], imgs[1], imgs[k] = 1, k, 0
        gens.append(Permutation(imgs))
    return PermutationGroup(n, gens, name=f"A{n}")


def cyclic_group(n: int) -> PermutationGroup:
    gens = [Permutation(list(range(1, n)) + [0])] if n > 1 else []
    return PermutationGroup(n, gens, name=f"C{n}")


# ---------------------------------------------------------------------------
# conjugacy classes, centralizers, normalizers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugacyData:
    """Conjugacy classes of a group (indices refer to the parent universe)."""

    representatives: tuple[int, ...]
    class_sizes: tuple[int, ...]
    centralizer_orders: tuple[int, ...]
    element_orders: tuple[int, ...]
    class_members: tuple[np.ndarray, ...]
    class_index_of: dict

    @property
    def count(self) -> int:
        return len(self.representatives)


def _orbits_under_maps(points: np.ndarray, maps: Sequence[np.ndarray]) -> np.ndarray:
    """Connected components of ``points`` under index maps (images must stay in ``points``)."""
    m = points.size
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    rows, cols = [], []
    for mp in maps:
        img = np.searchsorted(points, mp)
        rows.append(np.arange(m))
        cols.append(img)
    if not rows:
        return np.arange(m)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(m, m))
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def conjugacy_classes(G) -> ConjugacyData:
    """Classes of ``G`` under its own conjugation; representative = lexicographically minimal."""
    H = as_subgroup(G)
    U = H.parent
    pts = H.idx
    maps = [U.conjugate_by(pts, g) for g in H.gens]
    labels = _orbits_under_maps(pts, maps)
    groups: dict[int, list[int]] = {}
    for p, lab in zip(pts.tolist(), labels.tolist()):
        groups.setdefault(lab, []).append(p)
    classes = [np.array(sorted(v), dtype=np.int64) for v in groups.values()]
    orders = U.element_orders
    classes.sort(key=lambda c: (int(orders[c[0]]), int(c[0])))
    reps = tuple(int(c[0]) for c in classes)
    sizes = tuple(int(c.size) for c in classes)
    cent = tuple(H.order // s for s in sizes)
    index_of = {}
    for ci, c in enumerate(classes):
        for x in c.tolist():
            index_of[x] = ci
    data = ConjugacyData(reps, sizes, cent, tuple(int(orders[r]) for r in reps), tuple(classes), index_of)
    if sum(sizes) != H.order or any(s * c != H.order for s, c in zip(sizes, cent)):
        raise InvariantViolation("class equation fails")
    return data


def centralizer(G, S) -> SubgroupHandle:
    """Pointwise centralizer in ``G`` of a set of elements (indices or Permutations)."""
    H = as_subgroup(G)
    U = H.parent
    idxs = _as_indices(U, S)
    rows = U.elements_array[H.idx]
    keep = np.ones(H.order, dtype=bool)
    for s in idxs:
        srow = U.elements_array[s]
        keep &= (srow[rows] == rows[:, srow]).all(axis=1)
    return SubgroupHandle(U, H.idx[keep])


def _as_indices(U: PermutationGroup, S) -> list[int]:
    if isinstance(S, SubgroupHandle):
        return list(S.gens)
    out = []
    for s in S:
        out.append(U.index(s) if isinstance(s, Permutation) else int(s))
    return out


def transporter_mask(G, H: SubgroupHandle, K: SubgroupHandle) -> np.ndarray:
    """Boolean mask over ``G.idx`` of the g with H^g <= K."""
    Gs = as_subgroup(G)
    U = Gs.parent
    keep = np.ones(Gs.order, dtype=bool)
    for h in H.gens:
        conj = U.conjugates_of(h, Gs.idx)
        keep &= K.mask[conj]
    return keep


def transporter(G, H: SubgroupHandle, K: SubgroupHandle) -> np.ndarray:
    Gs = as_subgroup(G)
    return Gs.idx[transporter_mask(Gs, H, K)]


def normalizer(G, H: SubgroupHandle) -> SubgroupHandle:
    Gs = as_subgroup(G)
    return SubgroupHandle(Gs.parent, transporter(Gs, H, H))


def is_normal(H: SubgroupHandle, P) -> bool:
    Ps = as_subgroup(P)
    U = Ps.parent
    return all(normalizes(U, g, H) for g in Ps.gens)


def normalizes(U: PermutationGroup, g: int, H: SubgroupHandle) -> bool:
    if not H.gens:
        return True
    return bool(H.mask[U.conjugate_by(np.array(H.gens), g)].all())


def conjugate_orbit(G, H: SubgroupHandle) -> list[SubgroupHandle]:
    """All ``G``-conjugates of ``H``, ordered lexicographically."""
    Gs = as_subgroup(G)
    U = Gs.parent
    seen = {H.key: H}
    frontier = [H]
    while frontier:
        nxt = []
        for K in frontier:
            for g in Gs.gens:
                C = SubgroupHandle(U, U.conjugate_by(K.idx, g))
                if C.key not in seen:
                    seen[C.key] = C
                    nxt.append(C)
        frontier = nxt
    return sorted(seen.values())


def is_abelian(H: SubgroupHandle) -> bool:
    U = H.parent
    g = np.array(H.gens, dtype=np.int64)
    if g.size <= 1:
        return True
    return bool(np.all(U.commutators(g, g) == 0))


def is_cyclic(H: SubgroupHandle) -> bool:
    return bool(np.any(H.parent.element_orders[H.idx] == H.order))


# ---------------------------------------------------------------------------
# p-local structure
# ---------------------------------------------------------------------------


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def is_p_element_mask(U: PermutationGroup, p: int) -> np.ndarray:
    o = U.element_orders
    m = o.copy()
    while True:
        div = (m % p == 0)
        if not div.any():
            break
        m = np.where(div, m // p, m)
    return m == 1


def sylow_subgroup(G, p: int) -> SubgroupHandle:
    """A Sylow p-subgroup grown by adjoining p-elements of its normalizer."""
    _check_prime(p)
    Gs = as_subgroup(G)
    U = Gs.parent
    target = p_part(Gs.order, p)
    pmask = is_p_element_mask(U, p)
    P = U.trivial()
    while P.order < target:
        N = normalizer(Gs, P)
        cand = N.idx[pmask[N.idx] & ~P.mask[N.idx]]
        if cand.size == 0:
            raise InvariantViolation("normalizer growth stalled below the Sylow order")
        P = closure(U, [int(cand[0])], start=P)
    if P.order != target:
        raise InvariantViolation("Sylow subgroup has the wrong order")
    return P


def intersect(subgroups: Iterable[SubgroupHandle]) -> SubgroupHandle:
    subs = list(subgroups)
    mask = np.ones(subs[0].parent.order, dtype=bool)
    for S in subs:
        mask &= S.mask
    return SubgroupHandle(subs[0].parent, np.nonzero(mask)[0])


def p_core(G, p: int) -> SubgroupHandle:
    """O_p(G): intersection of all conjugates of a Sylow p-subgroup."""
    Gs = as_subgroup(G)
    P = sylow_subgroup(Gs, p)
    return intersect(conjugate_orbit(Gs, P))


def quotient_map(N: SubgroupHandle, P) -> tuple[PermutationGroup, np.ndarray]:
    """P/N realized by the action of P on the right cosets of N, with the projection.

    Returns ``(Q, image)`` where ``image[x]`` is the index in ``Q`` of the coset
    permutation of ``x`` for ``x`` in ``P`` and ``-1`` for other universe elements.
    """
    Ps = as_subgroup(P)
    U = Ps.parent
    if not N.issubset(Ps) or not is_normal(N, Ps):
        raise ValueError("N is not a normal subgroup of P")
    coset_of = np.full(U.order, -1, dtype=np.int64)
    reps = []
    for x in Ps.idx:
        if coset_of[x] >= 0:
            continue
        coset = U.mul(N.idx, np.int64(x))
        coset_of[coset] = len(reps)
        reps.append(int(x))
    reps_arr = np.array(reps, dtype=np.int64)
    gens = []
    for s in Ps.gens:
        images = coset_of[U.mul(reps_arr, np.int64(s))]
        gens.append(Permutation(images.tolist()))
    gens = [g for g in gens if not g.is_identity()]
    Q = PermutationGroup(len(reps), gens)
    if Q.order * N.order != Ps.order:
        raise InvariantViolation("coset action is not faithful on P/N")
    image = np.full(U.order, -1, dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, len(reps)))
    for start in range(0, Ps.order, chunk):
        xs = Ps.idx[start:start + chunk]
        rows = coset_of[U.mul(reps_arr[None, :], xs[:, None])]
        image[xs] = Q.index_of_rows(rows, verify=True)
    return Q, image


def quotient_group(N: SubgroupHandle, P) -> PermutationGroup:
    """P/N realized by the action of P on the right cosets of N."""
    return quotient_map(N, P)[0]


def commutator_subgroup(K: SubgroupHandle, A: SubgroupHandle) -> SubgroupHandle:
    """[K, A], generated by all commutators [k, a]."""
    U = K.parent
    comm = np.unique(U.commutators(K.idx, A.idx))
    return closure(U, comm.tolist())


def frattini_subgroup(K: SubgroupHandle) -> SubgroupHandle:
    """Phi(K) = K^p [K,K] for a p-group K."""
    U = K.parent
    if K.order == 1:
        return K
    ps = prime_divisors(K.order)
    if len(ps) != 1:
        raise ValueError("Frattini subgroup is implemented for p-groups only")
    p = ps[0]
    powers = np.unique(U.power(K.idx, p))
    comm = np.unique(U.commutators(K.idx, K.idx))
    return closure(U, np.union1d(powers, comm).tolist())


def cyclic_subgroups(G, mask: np.ndarray | None = None) -> list[SubgroupHandle]:
    """All cyclic subgroups <x> with x in G (optionally restricted by a mask over the universe)."""
    Gs = as_subgroup(G)
    U = Gs.parent
    done = np.zeros(U.order, dtype=bool)
    out = []
    orders = U.element_orders
    for x in Gs.idx:
        if done[x] or (mask is not None and not mask[x]):
            continue
        o = int(orders[x])
        pw = np.empty(o, dtype=np.int64)
        cur = 0
        for k in range(o):
            pw[k] = cur
            cur = int(U.mul(cur, x))
        C = SubgroupHandle(U, pw, gens=(int(x),) if o > 1 else ())
        gen_mask = np.array([math.gcd(k, o) == 1 for k in range(o)])
        done[pw[gen_mask]] = True
        out.append(C)
    return out


def count_p_singular(G, p: int) -> int:
    """|G_p| by element scan, cross-checked against the cyclic-subgroup sum."""
    _check_prime(p)
    Gs = as_subgroup(G)
    U = Gs.parent
    pmask = is_p_element_mask(U, p)
    scan = int(pmask[Gs.idx].sum())
    from fractions import Fraction
    total = Fraction(1)
    for C in cyclic_subgroups(Gs, mask=pmask):
        if C.order > 1:
            total += (1 - Fraction(1, p)) * C.order
    if total != scan:
        raise InvariantViolation(f"p-singular count mismatch: scan {scan}, formula {total}")
    return scan
