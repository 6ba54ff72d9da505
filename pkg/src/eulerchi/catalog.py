"""Named groups: symmetric, alternating, cyclic and matrix groups plus a small file catalog.

Recognized names:

* ``S<n>``, ``A<n>``, ``C<n>`` -- symmetric, alternating and cyclic groups of degree ``n``;
* ``GL(n,q)``, ``SL(n,q)`` -- matrix groups over the prime field of size ``q``,
  acting on nonzero vectors;
* any name listed in ``data/groups.txt`` (for example ``M11``).
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .permcore import (
    PermutationGroup,
    alternating_group,
    cyclic_group,
    group_from_generators,
    matrix_group_as_permutations,
    parse_generators,
    symmetric_group,
)

_MATRIX_RE = re.compile(r"^(GL|SL)\((\d+),(\d+)\)$", re.IGNORECASE)
_FAMILY_RE = re.compile(r"^([SAC])(\d+)$", re.IGNORECASE)


def canonical_name(name: str) -> str:
    return re.sub(r"\s+", "", name)


@lru_cache(maxsize=None)
def file_catalog() -> dict[str, tuple[int, str]]:
    """Entries of ``data/groups.txt`` as ``name -> (degree, generator text)``."""
    text = resources.files("eulerchi").joinpath("data/groups.txt").read_text(encoding="utf-8")
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, degree, gens = line.split(None, 2)
        out[canonical_name(name)] = (int(degree), gens.strip())
    return out


def known_names() -> list[str]:
    return sorted(file_catalog()) + ["A<n>", "C<n>", "GL(n,q)", "S<n>", "SL(n,q)"]


def group_by_name(name: str) -> PermutationGroup:
    key = canonical_name(name)
    m = _MATRIX_RE.match(key)
    if m:
        kind, n, q = m.group(1).upper(), int(m.group(2)), int(m.group(3))
        G = matrix_group_as_permutations(n, q, kind)
        G.name = f"{kind}({n},{q})"
        return G
    m = _FAMILY_RE.match(key)
    if m:
        letter, n = m.group(1).upper(), int(m.group(2))
        if n < 1:
            raise ValueError(f"degree must be positive in {name!r}")
        maker = {"S": symmetric_group, "A": alternating_group, "C": cyclic_group}[letter]
        return maker(n)
    entries = file_catalog()
    if key in entries:
        degree, gens = entries[key]
        return group_from_generators(degree, parse_generators(gens, degree), name=key)
    raise ValueError(f"unknown group {name!r}; known: {', '.join(known_names())}")


def group_from_text(gens: str, degree: int, name: str | None = None) -> PermutationGroup:
    """Group generated by semicolon-separated cycle-notation permutations."""
    return group_from_generators(degree, parse_generators(gens, degree), name=name)


__all__ = ["canonical_name", "file_catalog", "known_names", "group_by_name", "group_from_text"]
