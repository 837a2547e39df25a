"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: the
CWT oracle builds the kernel explicitly and sums position by position,
and the kNN oracle sorts exhaustive distance lists in pure Python.
"""

from __future__ import annotations

import math
import random
import struct
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from melwave.midi_ingest import Melody, NoteEvent


def make_melody(
    pitches: Sequence[int],
    durations=1,
    onsets=None,
    melody_id: str = "m",
    label: Optional[str] = None,
) -> Melody:
    """Build a melody from pitches plus uniform or per-note durations."""
    if not isinstance(durations, (list, tuple)):
        durations = [durations] * len(pitches)
    durations = [Fraction(d) for d in durations]
    if onsets is None:
        onsets = []
        t = Fraction(0)
        for d in durations:
            onsets.append(t)
            t += d
    else:
        onsets = [Fraction(o) for o in onsets]
    notes = [
        NoteEvent(p, o, d) for p, o, d in zip(pitches, onsets, durations)
    ]
    return Melody(melody_id, notes, label=label)


def transpose(melody: Melody, shift: int) -> Melody:
    notes = [NoteEvent(n.pitch + shift, n.onset, n.duration) for n in melody.notes]
    return Melody(melody.id, notes, label=melody.label)


def random_melody(rng: random.Random, melody_id: str = "m") -> Melody:
    """Random diatonic-ish melody with rests, off-grid-free durations."""
    notes = []
    t = Fraction(0)
    pitch = rng.randint(55, 75)
    for _ in range(rng.randint(8, 24)):
        pitch = min(100, max(40, pitch + rng.choice((-4, -2, -1, 0, 1, 2, 4))))
        duration = Fraction(rng.choice((1, 2, 4, 8)), 8)
        if rng.random() < 0.15:
            t += Fraction(rng.choice((1, 2, 4)), 8)  # rest
        notes.append(NoteEvent(pitch, t, duration))
        t += duration
    return Melody(melody_id, notes)


# --- MIDI byte assembly (independent of melwave's writer) ---------------

def vlq(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def midi_file(tracks: List[bytes], fmt: int = 0, division: int = 480) -> bytes:
    head = struct.pack(">4sIHHH", b"MThd", 6, fmt, len(tracks), division)
    body = b""
    for track in tracks:
        body += struct.pack(">4sI", b"MTrk", len(track)) + track
    return head + body


def track_bytes(events: List[Tuple[int, bytes]]) -> bytes:
    """Events are (absolute tick, message bytes); EOT is appended."""
    out = bytearray()
    last = 0
    for tick, message in events:
        out += vlq(tick - last) + message
        last = tick
    out += b"\x00\xff\x2f\x00"
    return bytes(out)


def note_on(pitch: int, velocity: int = 64, channel: int = 0) -> bytes:
    return bytes([0x90 | channel, pitch, velocity])


def note_off(pitch: int, velocity: int = 0, channel: int = 0) -> bytes:
    return bytes([0x80 | channel, pitch, velocity])


# --- independent CWT oracle ---------------------------------------------

def naive_cwt_row(signal: np.ndarray, scale: int) -> np.ndarray:
    """Direct-summation Haar CWT row: explicit kernel, one dot per position."""
    arr = np.asarray(signal, dtype=np.float64)
    length = len(arr)
    pad = min(scale, length)
    if pad == 0:
        padded = arr.copy()
    else:
        padded = np.concatenate([arr[:pad][::-1], arr, arr[-pad:][::-1]])
    amp = 1.0 / math.sqrt(scale)
    kernel = np.array([amp] * (scale // 2) + [-amp] * (scale // 2))
    row = np.empty(length)
    for u in range(length):
        row[u] = float(np.dot(kernel, padded[pad + u : pad + u + scale]))
    return row


def naive_fits(scale: int, length: int) -> bool:
    return scale <= min(scale, length) + 1


# --- independent kNN oracle ---------------------------------------------

def _oracle_distance(a, b, metric: str) -> float:
    width = max(len(a), len(b))
    pa = list(a) + [0.0] * (width - len(a))
    pb = list(b) + [0.0] * (width - len(b))
    if metric == "cityblock":
        return sum(abs(x - y) for x, y in zip(pa, pb))
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(pa, pb)))


def oracle_classify(
    query: Sequence[Sequence[float]],
    training: Sequence[Sequence[float]],
    labels: Sequence[str],
    k: int,
    metric: str,
) -> str:
    """Exhaustive kNN with the documented tie rules, in pure Python."""
    assigned = []
    for q in query:
        ranked = sorted(
            (_oracle_distance(q, t, metric), i) for i, t in enumerate(training)
        )
        kth = ranked[min(k, len(ranked)) - 1][0]
        neighbours = [(d, i) for d, i in ranked if d <= kth]
        votes, sums = {}, {}
        for d, i in neighbours:
            votes[labels[i]] = votes.get(labels[i], 0) + 1
            sums[labels[i]] = sums.get(labels[i], 0.0) + d
        top = max(votes.values())
        winner = min(
            (lab for lab in votes if votes[lab] == top),
            key=lambda lab: (sums[lab], lab),
        )
        assigned.append((winner, sums[winner]))
    counts, dists = {}, {}
    for lab, s in assigned:
        counts[lab] = counts.get(lab, 0) + 1
        dists[lab] = dists.get(lab, 0.0) + s
    top = max(counts.values())
    return min(
        (lab for lab in counts if counts[lab] == top),
        key=lambda lab: (dists[lab], lab),
    )
