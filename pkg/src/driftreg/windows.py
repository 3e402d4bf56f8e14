"""Bounded FIFO row stores: the model-fitting window and the evaluation buffer."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .exceptions import ArityMismatch, PushWhenFull


@dataclass(slots=True)
class LabeledRow:
    """One (features, target) pair; ``is_pseudo`` marks a self-assigned target."""

    features: np.ndarray
    target: float
    is_pseudo: bool = False


class SlidingWindow:
    """Fixed-capacity FIFO of labeled rows; pushing into a full window evicts the oldest."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._rows: deque[LabeledRow] = deque(maxlen=capacity)
        self._arity: int | None = None

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    @property
    def is_full(self) -> bool:
        return len(self._rows) == self.capacity

    def push(self, row: LabeledRow) -> LabeledRow | None:
        """Append a row; returns the evicted oldest row when the window was full."""
        self._check_arity(row)
        evicted = self._rows[0] if self.is_full else None
        self._rows.append(row)
        return evicted

    def rows(self) -> list[LabeledRow]:
        return list(self._rows)

    def replace_rows(self, rows) -> None:
        """Swap contents wholesale (used once, to standardize in place)."""
        rows = list(rows)
        if len(rows) != len(self._rows):
            raise ValueError("replacement must preserve the row count")
        self._rows = deque(rows, maxlen=self.capacity)

    def training_batch(self) -> tuple[np.ndarray, np.ndarray]:
        """Stack current contents into (X, y) arrays in arrival order."""
        X = np.stack([r.features for r in self._rows])
        y = np.fromiter((r.target for r in self._rows), dtype=np.float64, count=len(self._rows))
        return X, y

    def _check_arity(self, row: LabeledRow) -> None:
        n = row.features.shape[0]
        if self._arity is None:
            self._arity = n
        elif n != self._arity:
            raise ArityMismatch(f"row has {n} features, window holds rows with {self._arity}")


class EvalBuffer:
    """Fixed-capacity FIFO that accumulates rows for one evaluation cycle.

    Unlike the sliding window it never evicts: pushing into a full buffer is
    an orchestration bug, because the owner must drain it at the end of each
    cycle.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._rows: list[LabeledRow] = []

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    @property
    def is_full(self) -> bool:
        return len(self._rows) == self.capacity

    def push(self, row: LabeledRow) -> bool:
        """Append a row; returns True exactly when the buffer just became full."""
        if self.is_full:
            raise PushWhenFull(f"buffer already holds {self.capacity} rows")
        self._rows.append(row)
        return self.is_full

    def drain(self) -> list[LabeledRow]:
        """Return all rows in arrival order and empty the buffer."""
        rows = self._rows
        self._rows = []
        return rows

    def replace_rows(self, rows) -> None:
        rows = list(rows)
        if len(rows) != len(self._rows):
            raise ValueError("replacement must preserve the row count")
        self._rows = rows
