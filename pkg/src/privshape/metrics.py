"""Distances between symbol sequences and the bounded similarity score.

Symbols are compared through their integer indices (a=0, b=1, ...), which
are monotone in the underlying value bins.  The similarity score 1/(1+d)
lies in (0, 1], so selection mechanisms built on it have sensitivity 1.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache

from .series import SymbolSequence


class DistanceMetric(str, Enum):
    DTW = "dtw"
    SED = "sed"
    EUCLIDEAN = "euclidean"

    @classmethod
    def from_name(cls, name: str) -> "DistanceMetric":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown metric {name!r}; expected one of {valid}") from None


def distance(a: SymbolSequence, b: SymbolSequence, metric: DistanceMetric) -> float:
    """Distance between two sequences under the chosen metric.

    DTW uses per-cell cost |i-j| on symbol indices; SED is Levenshtein with
    unit operations; EUCLIDEAN resamples the shorter sequence to the longer
    length by nearest index and sums |i-j| over aligned positions.
    """
    return _distance_cached(a.symbols, b.symbols, DistanceMetric(metric))


def score(user_seq: SymbolSequence, candidate: SymbolSequence, metric: DistanceMetric) -> float:
    """Similarity in (0, 1]: 1/(1+distance); 1 exactly when the distance is 0."""
    return 1.0 / (1.0 + distance(user_seq, candidate, metric))


@lru_cache(maxsize=1 << 16)
def _distance_cached(a: tuple[int, ...], b: tuple[int, ...], metric: DistanceMetric) -> float:
    if metric is DistanceMetric.DTW:
        return _dtw(a, b)
    if metric is DistanceMetric.SED:
        return float(_sed(a, b))
    return _resampled_l1(a, b)


def _dtw(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    if not a or not b:
        raise ValueError("DTW is undefined for empty sequences")
    n, m = len(a), len(b)
    inf = float("inf")
    prev = [inf] * (m + 1)
    prev[0] = 0.0
    for i in range(1, n + 1):
        cur = [inf] * (m + 1)
        ai = a[i - 1]
        for j in range(1, m + 1):
            cost = abs(ai - b[j - 1])
            cur[j] = cost + min(prev[j], cur[j - 1], prev[j - 1])
        prev = cur
    return prev[m]


def _sed(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, sa in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, sb in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (sa != sb))
        prev = cur
    return prev[len(b)]


def _resampled_l1(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    if not a or not b:
        raise ValueError("Euclidean-style distance is undefined for empty sequences")
    if len(a) < len(b):
        a, b = b, a
    long_n, short_n = len(a), len(b)
    total = 0.0
    for i in range(long_n):
        if long_n == 1:
            j = 0
        else:
            j = int(i * (short_n - 1) / (long_n - 1) + 0.5)
        total += abs(a[i] - b[j])
    return total
