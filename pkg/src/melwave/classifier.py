"""Segment-level kNN classification of melodies into tune families.

Segments become fixed-length vectors by zero-padding at the end to a
common length n (the longest segment over everything being compared).
Each query segment votes with the majority label of its k nearest
training segments; the melody takes the plurality label of its segments.
Ties are broken deterministically: on the k-th distance all tied
neighbours vote, vote ties go to the label with the smallest summed
neighbour distance, then to the lexicographically smallest label.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import backends
from .errors import EmptyTrainingSet, SegmentTooLong
from .segmentation import Segment


class MetricKind(str, enum.Enum):
    """The two supported vector metrics."""

    EUCLIDEAN = "euclidean"
    CITYBLOCK = "cityblock"


@dataclass
class LabeledSegment:
    """A training segment tagged with its melody's tune family."""

    segment: Segment
    label: str


def pad_to(values: np.ndarray, n: int) -> np.ndarray:
    """Extend a vector to length n with trailing zeros."""
    arr = np.asarray(values, dtype=np.float64)
    if len(arr) > n:
        raise SegmentTooLong(f"segment of length {len(arr)} exceeds n={n}")
    if len(arr) == n:
        return arr.copy()
    return np.concatenate([arr, np.zeros(n - len(arr))])


def distance(a: np.ndarray, b: np.ndarray, metric: MetricKind, n: int) -> float:
    """Metric between two vectors after zero-padding both to length n."""
    pa = pad_to(a, n)
    pb = pad_to(b, n)
    diff = pa - pb
    if MetricKind(metric) is MetricKind.CITYBLOCK:
        return float(np.abs(diff).sum())
    return float(np.sqrt((diff * diff).sum()))


def _vote_segment(
    dist_row: np.ndarray, label_idx: np.ndarray, k: int, n_labels: int
) -> Tuple[int, np.ndarray]:
    """Winning label index for one query segment, plus per-label distance sums."""
    order = np.argsort(dist_row, kind="stable")
    kk = min(k, dist_row.size)
    kth = dist_row[order[kk - 1]]
    count = int(np.searchsorted(dist_row[order], kth, side="right"))
    neighbours = order[:count]
    votes = np.bincount(label_idx[neighbours], minlength=n_labels)
    sums = np.bincount(label_idx[neighbours], weights=dist_row[neighbours], minlength=n_labels)
    best = votes.max()
    candidates = np.flatnonzero(votes == best)
    winner = min(candidates, key=lambda c: (sums[c], c))
    return int(winner), sums


def _vote_melody(
    distances: np.ndarray, label_idx: np.ndarray, k: int, n_labels: int
) -> int:
    """Plurality label index over the per-segment kNN assignments."""
    assigned = np.empty(len(distances), dtype=np.int64)
    assigned_dist = np.empty(len(distances), dtype=np.float64)
    for i, row in enumerate(distances):
        winner, sums = _vote_segment(row, label_idx, k, n_labels)
        assigned[i] = winner
        assigned_dist[i] = sums[winner]
    counts = np.bincount(assigned, minlength=n_labels)
    dist_totals = np.bincount(assigned, weights=assigned_dist, minlength=n_labels)
    best = counts.max()
    candidates = np.flatnonzero(counts == best)
    return int(min(candidates, key=lambda c: (dist_totals[c], c)))


def classify_melody(
    query: Sequence[Segment],
    training: Sequence[LabeledSegment],
    k: int,
    metric: MetricKind,
    n: int,
) -> str:
    """Predict the tune family of a melody from its segments."""
    if not training:
        raise EmptyTrainingSet("no training segments")
    if not query:
        raise ValueError("no query segments")
    if not 1 <= k <= 5:
        raise ValueError(f"k must be in 1..5, got {k}")
    metric = MetricKind(metric)
    for seg in query:
        if len(seg.values) > n:
            raise SegmentTooLong(f"query segment of length {len(seg.values)} exceeds n={n}")
    for ls in training:
        if len(ls.segment.values) > n:
            raise SegmentTooLong(
                f"training segment of length {len(ls.segment.values)} exceeds n={n}"
            )

    labels = sorted(set(ls.label for ls in training))
    label_to_idx = {label: i for i, label in enumerate(labels)}
    label_idx = np.array([label_to_idx[ls.label] for ls in training], dtype=np.int64)

    query_pack = backends.pack([seg.values for seg in query])
    train_pack = backends.pack([ls.segment.values for ls in training])
    distances = backends.pairwise(query_pack, train_pack, metric.value)
    winner = _vote_melody(distances, label_idx, k, len(labels))
    return labels[winner]
