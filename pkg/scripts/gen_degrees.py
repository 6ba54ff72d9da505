"""Regenerate src/eulerchi/data/degrees.txt.

Symmetric and alternating groups are computed from partitions: the hook length
formula gives the degrees of S_n; a non-self-conjugate pair {l, l'} restricts
to one irreducible of A_n, a self-conjugate partition splits into two halves.
The remaining groups are transcribed from the ATLAS of Finite Groups.
"""

from __future__ import annotations

import math
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "eulerchi" / "data" / "degrees.txt"

TRANSCRIBED = {
    "GL(2,3)": (48, [1, 1, 2, 2, 2, 3, 3, 4]),
    "GL(3,2)": (168, [1, 3, 3, 6, 7, 8]),
    "SL(3,3)": (5616, [1, 12, 13, 16, 16, 16, 16, 26, 26, 26, 27, 39]),
    "M11": (7920, [1, 10, 10, 10, 11, 16, 16, 44, 45, 55]),
}


def partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def conjugate(lam: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0])) if lam else ()


def hook_degree(lam: tuple[int, ...]) -> int:
    n = sum(lam)
    conj = conjugate(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= row - j + conj[j] - i - 1
    return math.factorial(n) // hooks


def symmetric_degrees(n: int) -> list[int]:
    return sorted(hook_degree(lam) for lam in partitions(n))


def alternating_degrees(n: int) -> list[int]:
    out = []
    for lam in partitions(n):
        mu = conjugate(lam)
        if lam == mu:
            out += [hook_degree(lam) // 2] * 2
        elif lam > mu:
            out.append(hook_degree(lam))
    return sorted(out)


def main() -> None:
    lines = ["# name |G| k d1 ... dk  (irreducible complex character degrees)"]
    rows = []
    for n in range(1, 9):
        rows.append((f"S{n}", math.factorial(n), symmetric_degrees(n)))
    for n in range(3, 9):
        rows.append((f"A{n}", math.factorial(n) // 2, alternating_degrees(n)))
    for name, (order, degs) in TRANSCRIBED.items():
        rows.append((name, order, sorted(degs)))
    for name, order, degs in rows:
        if sum(d * d for d in degs) != order:
            raise SystemExit(f"{name}: sum of squared degrees differs from the order")
        lines.append(" ".join([name, str(order), str(len(degs))] + [str(d) for d in degs]))
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(rows)} groups to {OUT}")


if __name__ == "__main__":
    main()
