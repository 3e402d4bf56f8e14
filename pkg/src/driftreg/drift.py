"""Drift detectors: the RMSE-delta comparator and an adaptive-windowing gate."""

from __future__ import annotations

import math
from enum import Enum

from .exceptions import NonFiniteInput
from .validation import check_finite_scalar


class DetectorMode(str, Enum):
    """Which detector combination drives model replacement."""

    RMSE_ONLY = "rmse"
    ADWIN_GATED_RMSE = "adwin+rmse"
    NONE = "none"

    @classmethod
    def parse(cls, token: str) -> "DetectorMode":
        token = str(token).strip().lower()
        for mode in cls:
            if mode.value == token:
                return mode
        raise ValueError(
            f"unknown detector mode {token!r}; expected one of "
            f"{[m.value for m in cls]}"
        )


class RmseDeltaDetector:
    """Compares successive intermediary RMSE values against a fixed threshold.

    The first update primes the detector and never signals. Afterwards a
    drift is declared whenever the absolute difference between the new value
    and the stored reference exceeds ``threshold``. With the default
    ``"advance"`` policy the reference moves to the newest value after every
    check; with ``"on-drift-only"`` it moves only when a drift fired, so the
    comparison base stays pinned between drifts.
    """

    POLICIES = ("advance", "on-drift-only")

    def __init__(self, threshold: float, policy: str = "advance"):
        threshold = float(threshold)
        if math.isnan(threshold) or threshold < 0:
            raise ValueError("threshold must be non-negative (inf allowed)")
        if policy not in self.POLICIES:
            raise ValueError(f"policy must be one of {self.POLICIES}, got {policy!r}")
        self.threshold = threshold
        self.policy = policy
        self.last_rmse: float | None = None

    def update(self, new_rmse: float) -> bool:
        """Feed one intermediary RMSE; returns True when drift is declared."""
        value = check_finite_scalar(new_rmse, "rmse")
        if value < 0:
            raise NonFiniteInput(f"rmse must be non-negative, got {value}")
        if self.last_rmse is None:
            self.last_rmse = value
            return False
        drift = abs(value - self.last_rmse) > self.threshold
        if drift or self.policy == "advance":
            self.last_rmse = value
        return drift


class AdwinDetector:
    """Adaptive-windowing change detector over a scalar stream.

    Keeps a variable-length window of the most recent values in an
    exponential histogram: level ``l`` holds buckets summarizing ``2**l``
    items each (count implied, sum and sum of squares stored), and no level
    ever holds more than ``max_buckets`` summaries; overflow merges the two
    oldest buckets of the level into the next one. After every insertion,
    each split of the window into an older part and a newer part (at bucket
    boundaries) is tested, and the split violates the bound when

        |mean(older) - mean(newer)| >= sqrt(ln(4 n / delta) / (2 m))

    with ``n`` the window length and ``m`` the harmonic-mean term
    ``1 / (1/n_older + 1/n_newer)``. While any split violates the bound the
    oldest bucket is dropped, shrinking the window to the data that still
    looks stationary. Follows the adaptive-windowing scheme of Bifet &
    Gavalda (SDM 2007).

    Parameters
    ----------
    delta : float
        Confidence parameter in (0, 1); smaller means fewer false alarms.
    max_buckets : int
        Bucket fan-out per histogram level.
    """

    def __init__(self, delta: float = 0.002, max_buckets: int = 5):
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must be in (0, 1), got {delta}")
        if max_buckets < 1:
            raise ValueError("max_buckets must be positive")
        self.delta = delta
        self.max_buckets = max_buckets
        self.reset()

    def reset(self) -> None:
        """Clear all buckets and aggregates."""
        self._level_sums: list[list[float]] = [[]]
        self._level_sumsq: list[list[float]] = [[]]
        self._count = 0
        self._sum = 0.0
        self._sum_sq = 0.0
        self.detections = 0

    @property
    def total_count(self) -> int:
        """Number of items currently retained in the window."""
        return self._count

    @property
    def mean(self) -> float:
        return self._sum / self._count if self._count else 0.0

    @property
    def variance(self) -> float:
        if not self._count:
            return 0.0
        m = self._sum / self._count
        return max(self._sum_sq / self._count - m * m, 0.0)

    @property
    def bucket_count(self) -> int:
        return sum(len(level) for level in self._level_sums)

    def update(self, value: float) -> bool:
        """Insert one value; returns True when old data was dropped (change)."""
        v = check_finite_scalar(value)
        sums = self._level_sums
        sumsq = self._level_sumsq
        sums[0].append(v)
        sumsq[0].append(v * v)
        self._count += 1
        self._sum += v
        self._sum_sq += v * v

        # Cascade merges upward until every level is back within fan-out.
        lvl = 0
        while len(sums[lvl]) > self.max_buckets:
            if lvl + 1 == len(sums):
                sums.append([])
                sumsq.append([])
            merged_sum = sums[lvl].pop(0) + sums[lvl].pop(0)
            merged_sq = sumsq[lvl].pop(0) + sumsq[lvl].pop(0)
            sums[lvl + 1].append(merged_sum)
            sumsq[lvl + 1].append(merged_sq)
            lvl += 1

        dropped = False
        while self._count >= 2 and self._violating_split_exists():
            self._drop_oldest_bucket()
            dropped = True
        if dropped:
            self.detections += 1
        return dropped

    def _violating_split_exists(self) -> bool:
        sums = self._level_sums
        n = self._count
        total = self._sum
        ln_term = math.log(4.0 * n / self.delta)
        sqrt = math.sqrt
        n0 = 0
        s0 = 0.0
        for lvl in range(len(sums) - 1, -1, -1):
            size = 1 << lvl
            for s in sums[lvl]:
                n0 += size
                s0 += s
                n1 = n - n0
                if n1 <= 0:
                    return False
                half_inv_m = 0.5 * (1.0 / n0 + 1.0 / n1)
                if abs(s0 / n0 - (total - s0) / n1) >= sqrt(half_inv_m * ln_term):
                    return True
        return False

    def _drop_oldest_bucket(self) -> None:
        sums = self._level_sums
        sumsq = self._level_sumsq
        for lvl in range(len(sums) - 1, -1, -1):
            if sums[lvl]:
                self._count -= 1 << lvl
                self._sum -= sums[lvl].pop(0)
                self._sum_sq -= sumsq[lvl].pop(0)
                break
        while len(sums) > 1 and not sums[-1]:
            sums.pop()
            sumsq.pop()
