"""Work budgets: every potentially exponential search is capped.

The HYPERVC_BUDGET environment variable overrides any default budget;
exceeding a budget raises BudgetExceeded cleanly instead of OOMing.
"""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """A search or enumeration exceeded its configured work budget."""


def resolve_budget(default: int | None = None) -> int:
    env = os.environ.get("HYPERVC_BUDGET")
    if env is not None:
        return int(env)
    return DEFAULT_BUDGET if default is None else default


def charge(counter: int, limit: int, what: str) -> None:
    if counter > limit:
        raise BudgetExceeded(f"{what}: {counter} > budget {limit}")
