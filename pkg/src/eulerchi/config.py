"""Runtime limits for the dense enumeration engine.

The limits can be overridden with the ``EULER_CAPS`` environment variable,
e.g. ``EULER_CAPS="elements=200000,family=50000"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_VAR = "EULER_CAPS"


@dataclass(frozen=True)
class Caps:
    elements: int = 1_000_000
    family: int = 100_000

    @classmethod
    def from_env(cls) -> "Caps":
        raw = os.environ.get(ENV_VAR, "").strip()
        if not raw:
            return cls()
        values = {}
        for item in raw.split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            key = key.strip().lower()
            if key not in ("elements", "family"):
                raise ValueError(f"unknown cap {key!r} in {ENV_VAR}")
            values[key] = int(val)
        return cls(**values)


def caps() -> Caps:
    return Caps.from_env()


class CapExceeded(RuntimeError):
    """Raised when an enumeration would exceed a configured cap."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed; this indicates a defect."""
