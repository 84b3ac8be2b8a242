"""Wall-clock budgets for the exponential searches."""

from __future__ import annotations

import os
import time

DEFAULT_BUDGET_MS = 60_000


class BudgetExceeded(Exception):
    """Raised by a search that ran out of its time budget."""

    def __init__(self, message: str = "time budget exceeded", nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


def default_budget_ms() -> int:
    value = os.environ.get("COMPART_DEFAULT_BUDGET_MS")
    return int(value) if value else DEFAULT_BUDGET_MS


class Budget:
    """Deadline tracker. ``budget_ms=None`` means unlimited.

    ``tick()`` is cheap: the clock is only read every ``stride`` calls.
    """

    __slots__ = ("budget_ms", "deadline", "start", "_count", "_stride")

    def __init__(self, budget_ms: int | None, stride: int = 256):
        self.budget_ms = budget_ms
        self.start = time.monotonic()
        self.deadline = None if budget_ms is None else self.start + budget_ms / 1000.0
        self._count = 0
        self._stride = stride

    @classmethod
    def coerce(cls, budget) -> "Budget":
        if isinstance(budget, Budget):
            return budget
        return cls(budget)

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def tick(self) -> None:
        self._count += 1
        if self._count % self._stride == 0 and self.expired():
            raise BudgetExceeded(nodes=self._count)

    @property
    def elapsed_ms(self) -> float:
        return (time.monotonic() - self.start) * 1000.0
