"""Sampling melodies into discrete pitch signals.

A melody becomes a piecewise-constant series of MIDI pitch numbers with
``rate`` samples per quarter note. Sampling is left-aligned: sample ``l``
takes the pitch sounding at time ``l / rate``. Rests are filled before
sampling: a leading rest takes the first note's pitch, any later rest the
pitch of the preceding note.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .errors import EmptyMelody, EmptyVector
from .midi_ingest import Melody, NoteEvent


@dataclass
class PitchSignal:
    """Sampled pitch values plus the rate they were sampled at."""

    samples: np.ndarray
    rate: int

    def __len__(self) -> int:
        return len(self.samples)


def rest_fill(notes: Sequence[NoteEvent]) -> List[Tuple[Fraction, Fraction, int]]:
    """Return a gap-free pitch timeline covering [0, end of last note].

    Each entry is (start, end, pitch) with half-open time spans. Rests are
    absorbed by extending the preceding note to the next onset; a leading
    rest is covered by extending the first note's pitch back to time 0.
    """
    timeline: List[Tuple[Fraction, Fraction, int]] = []
    if not notes:
        return timeline
    first = notes[0]
    if first.onset > 0:
        timeline.append((Fraction(0), first.onset, first.pitch))
    for i, note in enumerate(notes):
        end = notes[i + 1].onset if i + 1 < len(notes) else note.end
        timeline.append((note.onset, end, note.pitch))
    return timeline


def sample_melody(melody: Melody, rate: int) -> PitchSignal:
    """Sample a melody at ``rate`` samples per quarter note.

    The output has ceil(span * rate) samples; sample ``l`` covers the time
    window [l/rate, (l+1)/rate) and takes the pitch sounding at its left
    edge.
    """
    if rate < 1:
        raise ValueError(f"rate must be >= 1, got {rate}")
    if not melody.notes:
        raise EmptyMelody(f"melody {melody.id!r} has no notes")
    timeline = rest_fill(melody.notes)
    span = timeline[-1][1]
    length = math.ceil(span * rate)
    samples = np.empty(length, dtype=np.float64)
    for start, end, pitch in timeline:
        a = math.ceil(start * rate)
        b = min(math.ceil(end * rate), length)
        samples[a:b] = pitch
    return PitchSignal(samples, rate)


def normalize(values: np.ndarray) -> np.ndarray:
    """Subtract the mean, making the vector transposition-invariant."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyVector("cannot normalize an empty vector")
    return arr - arr.mean()
