"""Enumeration budgets."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import BudgetExceeded


@dataclass(frozen=True)
class Budget:
    max_tokens: int = 16            # subset enumeration over at most 2**max_tokens sets
    max_cpts: int = 12              # largest Con x A' for exponent enumeration
    max_branches: int = 100_000     # associate branches per V
    max_relations: int = 1 << 16    # candidate relations in brute-force mapping searches
    max_classes: int = 14           # exponent token classes kept for Con enumeration

    def __post_init__(self):
        for k, v in self.__dict__.items():
            if v <= 0:
                raise ValueError(f"budget {k} must be positive")

    def need(self, what: str, value: int, limit_name: str) -> None:
        limit = getattr(self, limit_name)
        if value > limit:
            raise BudgetExceeded(f"{what}: {value} exceeds {limit_name}={limit}")

    def scaled(self, factor: float) -> "Budget":
        return replace(self, **{k: max(1, int(v * factor)) for k, v in self.__dict__.items()})


def budget_from_env(default: Budget | None = None) -> Budget:
    """Read ``ISW_BUDGET``: either a single integer for ``max_tokens`` or
    comma-separated ``key=value`` overrides."""
    base = default or Budget()
    raw = os.environ.get("ISW_BUDGET", "").strip()
    if not raw:
        return base
    if raw.isdigit():
        return replace(base, max_tokens=int(raw))
    kw = {}
    for part in raw.split(","):
        k, _, v = part.partition("=")
        kw[k.strip()] = int(v)
    return replace(base, **kw)


DEFAULT_BUDGET = Budget()
