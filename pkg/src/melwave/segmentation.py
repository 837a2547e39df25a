"""Segment boundaries from wavelet maxima or the local boundary detection
model, and cutting representation signals into segments.

Boundaries are sample indices strictly inside (0, L); the implicit
boundaries at 0 and L are added when cutting, so a melody's segments
always tile [0, L) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import TooFewNotes
from .midi_ingest import Melody
from .pitch_signal import PitchSignal, normalize
from .wavelet import cwt_row, local_maxima

#: LBDM parameter weights: pitch intervals, inter-onset intervals, rests.
_LBDM_WEIGHTS = (0.25, 0.5, 0.25)


@dataclass
class Segment:
    """A contiguous slice of a representation signal.

    ``kind`` is "vr" (mean-normalized pitch values) or "wr" (wavelet
    coefficient values taken verbatim).
    """

    values: np.ndarray
    melody_id: str
    start: int
    end: int
    kind: str

    def __len__(self) -> int:
        return len(self.values)


def positive_maxima(row: np.ndarray) -> Tuple[int, ...]:
    """Local maxima with a strictly positive coefficient value.

    Under the fall-positive sign convention only these mark falls of
    average pitch; zero or negative bumps (constant or rising passages)
    are not boundaries.
    """
    return tuple(i for i in local_maxima(row) if row[i] > 0)


def wavelet_boundaries(signal: PitchSignal, scale: int) -> Tuple[int, ...]:
    """Cut points at the positive local maxima of the scale's coefficient row."""
    row = cwt_row(signal.samples, scale)
    return positive_maxima(row)


def _degree_of_change(x: float, y: float) -> float:
    total = x + y
    return abs(x - y) / total if total > 0 else 0.0


def _parameter_strengths(values: Sequence[float]) -> np.ndarray:
    """Sequence strength x_i * (r(x_{i-1}, x_i) + r(x_i, x_{i+1})).

    Out-of-range neighbours count as equal to x_i, contributing nothing.
    The result is normalized by its maximum when that maximum is positive.
    """
    m = len(values)
    out = np.zeros(m, dtype=np.float64)
    for i in range(m):
        prev_x = values[i - 1] if i > 0 else values[i]
        next_x = values[i + 1] if i < m - 1 else values[i]
        out[i] = values[i] * (
            _degree_of_change(prev_x, values[i]) + _degree_of_change(values[i], next_x)
        )
    peak = out.max()
    if peak > 0:
        out /= peak
    return out


def lbdm_profile(melody: Melody) -> np.ndarray:
    """Boundary strength in [0, 1] for every note-to-note transition.

    Combines pitch-interval, inter-onset-interval and rest change profiles
    with weights 0.25 / 0.5 / 0.25.
    """
    notes = melody.notes
    if len(notes) < 2:
        raise TooFewNotes(f"melody {melody.id!r} has fewer than 2 notes")
    pitches = [abs(b.pitch - a.pitch) for a, b in zip(notes, notes[1:])]
    iois = [float(b.onset - a.onset) for a, b in zip(notes, notes[1:])]
    rests = [max(0.0, float(b.onset - a.end)) for a, b in zip(notes, notes[1:])]
    combined = (
        _LBDM_WEIGHTS[0] * _parameter_strengths(pitches)
        + _LBDM_WEIGHTS[1] * _parameter_strengths(iois)
        + _LBDM_WEIGHTS[2] * _parameter_strengths(rests)
    )
    return combined


def lbdm_boundaries(melody: Melody, threshold: float, rate: int) -> Tuple[int, ...]:
    """Cut points where the LBDM profile exceeds the threshold.

    A transition between notes i and i+1 cuts at round(onset_{i+1} * rate);
    cut points falling on 0 or L are discarded.
    """
    profile = lbdm_profile(melody)
    length = math.ceil(melody.span * rate)
    cuts = set()
    for i, strength in enumerate(profile):
        if strength > threshold:
            cut = int(round(melody.notes[i + 1].onset * rate))
            if 0 < cut < length:
                cuts.add(cut)
    return tuple(sorted(cuts))


def extract_segments(
    series: np.ndarray,
    boundaries: Sequence[int],
    kind: str,
    melody_id: str,
) -> List[Segment]:
    """Cut a representation signal at the boundaries into tiling segments.

    "vr" segments are mean-normalized after the cut; "wr" segments keep
    their coefficient values verbatim.
    """
    if kind not in ("vr", "wr"):
        raise ValueError(f"unknown representation {kind!r}")
    arr = np.asarray(series, dtype=np.float64)
    length = len(arr)
    cuts = sorted(set(int(b) for b in boundaries))
    if cuts and (cuts[0] <= 0 or cuts[-1] >= length):
        raise ValueError(f"boundaries {cuts} outside (0, {length})")
    edges = [0, *cuts, length]
    segments = []
    for start, end in zip(edges, edges[1:]):
        values = arr[start:end]
        if kind == "vr":
            values = normalize(values)
        else:
            values = values.copy()
        segments.append(Segment(values, melody_id, start, end, kind))
    return segments
