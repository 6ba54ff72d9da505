"""Subgroups whose orders involve only a given set of primes.

For a nonempty set ``pi`` of primes, ``S_G^pi`` is the poset of pi-subgroups
of ``G`` (the trivial subgroup included).  Its weighting

    k^H = -chi~(H // S_G^pi) = sum_{K >= H} mu(H, K)

is computed twice: from Moebius sums on the member poset and from the class
table system  sum_[K] S(H,[K]) k^[K] = 1.  The weighting is not a function
of N_G(H)/H when ``pi`` has several primes, so no quotient shortcut is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .config import InvariantViolation
from .permcore import (
    SubgroupHandle,
    _check_prime,
    as_subgroup,
    is_cyclic,
    pi_part,
    prime_divisors,
    transporter_mask,
)
from .posetcat import EulerUndefined, solve_exact
from .reports import Report
from .subgroups import SubgroupFamily, _pi_element_mask, enumerate_pi_subgroups

# Explicit Moebius matrices are only formed for member posets up to this size;
# larger posets use the recursive weighting (the same sums, computed level-wise).
MOEBIUS_LIMIT = 1500
# The vanishing criterion needs normalizers of all overgroups; skip it for huge families.
VANISHING_LIMIT = 3000


@dataclass
class PiContext:
    G: SubgroupHandle
    primes: tuple[int, ...]
    family: SubgroupFamily
    pi_singular_count: int

    @property
    def hall_order(self) -> int:
        return pi_part(self.G.order, self.primes)


def pi_context(G, primes: Iterable[int], family: SubgroupFamily | None = None) -> PiContext:
    Gs = as_subgroup(G)
    primes = tuple(sorted(set(int(p) for p in primes)))
    if not primes:
        raise ValueError("the set of primes must be nonempty")
    for p in primes:
        _check_prime(p)
    F = family if family is not None else enumerate_pi_subgroups(Gs, primes)
    for o in F.class_orders:
        if not set(prime_divisors(o)) <= set(primes):
            raise InvariantViolation("family member is not a pi-subgroup")
    count = int(_pi_element_mask(Gs.parent, primes)[Gs.idx].sum())
    return PiContext(Gs, primes, F, count)


def _class_table_weights(F: SubgroupFamily) -> list[int]:
    succ = F.class_table("successors")
    sol = solve_exact(succ, [1] * F.class_count)
    if sol is None or any(x.denominator != 1 for x in sol):
        raise InvariantViolation("class-table weighting is not integral")
    return [int(x) for x in sol]


def _member_weights(F: SubgroupFamily) -> np.ndarray:
    P = F.poset()
    w = P.weighting_values()
    if F.size <= MOEBIUS_LIMIT:
        mu = P.moebius_matrix()
        sums = mu.astype(object).sum(axis=1)
        if any(int(a) != int(b) for a, b in zip(sums.tolist(), w.tolist())):
            raise InvariantViolation("Moebius row sums differ from the recursive weighting")
    return w


def pi_weighting(ctx: PiContext) -> list[int]:
    """Class weighting -chi~(H // S_G^pi), checked by Moebius sums and the class table."""
    F = ctx.family
    table = _class_table_weights(F)
    w = _member_weights(F)
    for c in range(F.class_count):
        vals = set(int(x) for x in w[F.class_slices[c]].tolist())
        if len(vals) != 1:
            raise InvariantViolation("weighting is not constant on a conjugacy class")
        (v,) = vals
        if v != table[c]:
            raise InvariantViolation(f"class {c}: Moebius sum {v} differs from class-table value {table[c]}")
    return table


def pi_global_identity(ctx: PiContext) -> Report:
    """sum_H -chi~(H//S_G^pi) |H| = |G_pi|, chi(O_G^pi) = |G_pi|/|G| and the upward sums."""
    from .orbitstructs import family_orbit_skeleton

    F = ctx.family
    G = ctx.G
    rep = Report("pi_global_identity")
    k = pi_weighting(ctx)
    lengths = F.class_lengths
    orders = F.class_orders
    total = sum(a * n * o for a, n, o in zip(k, lengths, orders))
    rep.equal("sum -chi~(H//S_G^pi) |H| = |G_pi|", total, ctx.pi_singular_count)
    succ = F.class_table("successors")
    bad = [h for h in range(F.class_count)
           if sum(int(succ[h, c]) * k[c] for c in range(F.class_count)) != 1]
    rep.check("upward sums over K >= H equal 1", bad, [], "==")
    sk = family_orbit_skeleton(F, "O^pi")
    density = Fraction(ctx.pi_singular_count, G.order)
    w = sk.skeleton.weighting()
    cw = sk.skeleton.coweighting()
    rep.equal("zeta-solve chi(O_G^pi) = |G_pi|/|G|", w.total if w else -1, density)
    w_formula = [Fraction(a, F.normalizer_order(c) // orders[c]) for c, a in enumerate(k)]
    rep.check("zeta-solve weighting matches -chi~(H//S)/|N(H):H|", list(w.values) if w else None, w_formula, "==")
    cow_formula = [cyclic_orbit_coweight_formula(F.representative(c)) * orders[c] * lengths[c] / G.order
                   for c in range(F.class_count)]
    rep.check("zeta-solve coweighting matches -chi~(O_K^[1,K))/|G:K|", list(cw.values) if cw else None,
              cow_formula, "==")
    rep.header = ["|H|"] + orders
    rep.rows = [["-chi~(H//S_G^pi)"] + k, ["|G:N_G(H)|"] + lengths,
                ["|N_G(H):H|_pi"] + [pi_part(F.normalizer_order(c) // orders[c], ctx.primes)
                                     for c in range(F.class_count)]]
    rep.values = {
        "pi": list(ctx.primes),
        "sum": total,
        "pi_singular": ctx.pi_singular_count,
        "chi_S_pi_star": 1 - k[F.class_count - 1] if orders[-1] == 1 else None,
        "chi_orbit_category": density,
    }
    return rep.require()


def cyclic_orbit_coweight_formula(K: SubgroupHandle) -> Fraction:
    """phi(|K|)/|K| for cyclic K, else 0."""
    if not is_cyclic(K):
        return Fraction(0)
    n = K.order
    phi = sum(1 for j in range(1, n + 1) if math.gcd(j, n) == 1)
    return Fraction(phi, n)


def cyclic_orbit_coweight(K) -> Fraction:
    """-chi~(O_K^{[1,K)}) by the totient formula, checked against the zeta-solve."""
    from .orbitstructs import family_orbit_skeleton

    Ks = as_subgroup(K)
    value = cyclic_orbit_coweight_formula(Ks)
    if Ks.order == 1:
        chi = Fraction(0)
    else:
        F = enumerate_pi_subgroups(Ks, prime_divisors(Ks.order))
        proper = F.restrict_classes([c for c in range(F.class_count) if F.representative(c).order < Ks.order])
        sk = family_orbit_skeleton(proper, "O^[1,K)")
        try:
            chi = sk.skeleton.euler_characteristic()
        except EulerUndefined as exc:  # pragma: no cover - finite EI categories always have one
            raise InvariantViolation("orbit category of proper subgroups has no Euler characteristic") from exc
    if 1 - chi != value:
        raise InvariantViolation(f"-chi~(O_K^[1,K)) = {1 - chi} but the totient formula gives {value}")
    return value


def hio_divisibility(ctx: PiContext) -> Report:
    """|N_G(H):H|_pi divides -chi~(H//S_G^pi), with the Hall and vanishing criteria."""
    F = ctx.family
    G = ctx.G
    rep = Report("hio_divisibility")
    k = pi_weighting(ctx)
    parts = []
    for c in range(F.class_count):
        H = F.representative(c)
        part = pi_part(F.normalizer_order(c) // H.order, ctx.primes)
        parts.append(part)
        rep.divides(f"|N(H):H|_pi divides the weight (class {c}, |H|={H.order})", part, k[c])
        if H.order == ctx.hall_order:
            rep.equal(f"Hall pi-subgroup has weight 1 (class {c})", k[c], 1)
    vanishing = 0
    if F.size <= VANISHING_LIMIT:
        leq = F.containment()
        norm_cache: dict[int, np.ndarray] = {}
        for c in range(F.class_count):
            h = F.class_slices[c].start
            over = [j for j in np.nonzero(leq[h])[0].tolist() if j != h]
            if not over:
                rep.equal(f"maximal pi-subgroup has weight 1 (class {c})", k[c], 1)
                continue
            inter = np.ones(G.order, dtype=bool)
            for j in over:
                if j not in norm_cache:
                    K = F.members[j]
                    norm_cache[j] = transporter_mask(G, K, K)
                inter &= norm_cache[j]
            O = np.zeros(G.parent.order, dtype=bool)
            O[G.idx[inter]] = True
            if any(O[F.members[j].idx].all() for j in over):
                vanishing += 1
                rep.equal(f"vanishing criterion gives weight 0 (class {c})", k[c], 0)
    rep.header = ["|H|"] + F.class_orders
    rep.rows = [["-chi~(H//S_G^pi)"] + k, ["|N_G(H):H|_pi"] + parts]
    rep.values = {"pi": list(ctx.primes), "vanishing_criterion_hits": vanishing}
    return rep.require()


def pi_table(ctx: PiContext) -> Report:
    """Full report: weighting row, lengths, pi-parts, the global identity and HIO divisibility."""
    g = pi_global_identity(ctx)
    h = hio_divisibility(ctx)
    rep = Report("pi_subgroups", checks=g.checks + h.checks, values=g.values, header=g.header, rows=g.rows)
    rep.values["vanishing_criterion_hits"] = h.values["vanishing_criterion_hits"]
    return rep.require()


__all__ = [
    "PiContext",
    "pi_context",
    "pi_weighting",
    "pi_global_identity",
    "cyclic_orbit_coweight",
    "cyclic_orbit_coweight_formula",
    "hio_divisibility",
    "pi_table",
]
