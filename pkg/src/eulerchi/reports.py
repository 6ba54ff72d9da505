"""Verification reports shared by the orbit-category, pi-subgroup and conjecture modules.

A :class:`Report` is a named list of :class:`Check` entries (an identity,
divisibility or congruence with its exact left and right values) plus an
optional table of supporting data.  Reports serialize to deterministic JSON
with fractions written as ``"p/q"`` strings, and to TSV.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .config import InvariantViolation
from .posetcat import format_fraction


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return format_fraction(x)
    if isinstance(x, int):
        return x
    if hasattr(x, "item") and not isinstance(x, (list, tuple, dict)):
        return _jsonable(x.item())
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _cell(x: Any) -> str:
    if isinstance(x, Fraction):
        return format_fraction(x)
    if x is None:
        return ""
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_cell(v) for v in x) + "]"
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _cell(x.item())
    return str(x)


@dataclass(frozen=True)
class Check:
    """One verified relation.

    ``relation`` is ``"="`` (left equals right), ``"|"`` (left divides right),
    or ``"=="`` for a boolean condition recorded as left/right flags.
    """

    label: str
    left: Any
    right: Any
    relation: str = "="

    @property
    def passed(self) -> bool:
        if self.relation == "=":
            return Fraction(self.left) == Fraction(self.right)
        if self.relation == "|":
            a, b = Fraction(self.left), Fraction(self.right)
            if a.denominator != 1 or b.denominator != 1:
                return False
            if a == 0:
                return b == 0
            return b.numerator % a.numerator == 0
        if self.relation == "==":
            return self.left == self.right
        raise ValueError(self.relation)

    def to_dict(self) -> dict:
        return {"label": self.label, "left": _jsonable(self.left), "right": _jsonable(self.right),
                "relation": self.relation, "pass": self.passed}


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    values: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list[list] = field(default_factory=list)
    footer: list[str] = field(default_factory=list)

    def check(self, label: str, left, right, relation: str = "=") -> Check:
        c = Check(label, left, right, relation)
        self.checks.append(c)
        return c

    def equal(self, label: str, left, right) -> Check:
        return self.check(label, left, right, "=")

    def divides(self, label: str, left, right) -> Check:
        return self.check(label, left, right, "|")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def require(self) -> "Report":
        """Raise :class:`InvariantViolation` if any check failed."""
        bad = self.failures
        if bad:
            desc = "; ".join(f"{c.label}: {_cell(c.left)} {c.relation} {_cell(c.right)}" for c in bad[:5])
            raise InvariantViolation(f"{self.name}: {desc}")
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "values": _jsonable(self.values),
            "table": {"header": _jsonable(self.header), "rows": _jsonable(self.rows)},
            "checks": [c.to_dict() for c in self.checks],
            "footer": list(self.footer),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_tsv(self) -> str:
        lines = []
        if self.header:
            lines.append("\t".join(_cell(h) for h in self.header))
        for r in self.rows:
            lines.append("\t".join(_cell(x) for x in r))
        for key in sorted(self.values):
            v = self.values[key]
            if isinstance(v, (list, tuple)):
                lines.append("\t".join([key] + [_cell(x) for x in v]))
            else:
                lines.append(f"{key}\t{_cell(v)}")
        for c in self.checks:
            lines.append(f"check\t{c.label}\t{_cell(c.left)}\t{c.relation}\t{_cell(c.right)}\t"
                         f"{'PASS' if c.passed else 'FAIL'}")
        lines.extend(self.footer)
        return "\n".join(lines) + "\n"


def table_rows(label: str, values: Sequence) -> list:
    return [label] + list(values)
