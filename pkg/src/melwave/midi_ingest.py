"""Standard MIDI file ingestion into monophonic note-event sequences.

Reads format 0 and format 1 files with a metrical (ticks per quarter
note) division. All tracks are merged before note-on/note-off pairing,
tempo and velocity are discarded, and stray polyphony is resolved
deterministically: an earlier note is truncated at the next onset and
same-onset collisions keep the highest pitch.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .errors import EmptyMelody, MalformedFile, UnsupportedDivision

_NOTE_OFF = 0x80
_NOTE_ON = 0x90
# Data byte counts for channel messages, keyed by the high status nibble.
_DATA_BYTES = {0x80: 2, 0x90: 2, 0xA0: 2, 0xB0: 2, 0xC0: 1, 0xD0: 1, 0xE0: 2}


@dataclass
class NoteEvent:
    """One note: MIDI pitch plus onset and duration in quarter notes."""

    pitch: int
    onset: Fraction
    duration: Fraction

    def __post_init__(self):
        self.onset = Fraction(self.onset)
        self.duration = Fraction(self.duration)
        if not 0 <= self.pitch <= 127:
            raise ValueError(f"pitch {self.pitch} outside 0..127")
        if self.onset < 0:
            raise ValueError(f"negative onset {self.onset}")
        if self.duration <= 0:
            raise ValueError(f"non-positive duration {self.duration}")

    @property
    def end(self) -> Fraction:
        return self.onset + self.duration


@dataclass
class Melody:
    """A non-empty, monophonic, onset-sorted sequence of notes."""

    id: str
    notes: List[NoteEvent]
    label: Optional[str] = None

    def __post_init__(self):
        if not self.notes:
            raise EmptyMelody(f"melody {self.id!r} has no notes")
        for a, b in zip(self.notes, self.notes[1:]):
            if b.onset <= a.onset:
                raise ValueError(f"melody {self.id!r}: onsets not strictly increasing")
            if a.end > b.onset:
                raise ValueError(f"melody {self.id!r}: overlapping notes")

    @property
    def span(self) -> Fraction:
        """Total length in quarter notes, from time 0 to the last note end."""
        return self.notes[-1].end


class _Reader:
    """Byte cursor with the integer readers the SMF format needs."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def remaining(self) -> int:
        return len(self.data) - self.pos

    def take(self, n: int) -> bytes:
        if self.remaining() < n:
            raise MalformedFile("unexpected end of file")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def vlq(self) -> int:
        """Variable-length quantity, 7 bits per byte, high bit continues."""
        value = 0
        for _ in range(4):
            b = self.u8()
            value = (value << 7) | (b & 0x7F)
            if not b & 0x80:
                return value
        raise MalformedFile("variable-length quantity longer than 4 bytes")


def _parse_track(chunk: bytes):
    """Yield (tick, is_on, pitch) note edges from one MTrk chunk body."""
    r = _Reader(chunk)
    tick = 0
    status = None
    events = []
    while r.remaining() > 0:
        tick += r.vlq()
        b = r.data[r.pos]
        if b >= 0x80:
            r.pos += 1
            if b == 0xFF:
                r.u8()  # meta type
                r.take(r.vlq())
                continue
            if b in (0xF0, 0xF7):
                r.take(r.vlq())
                continue
            if b >= 0xF0:
                raise MalformedFile(f"unsupported system message 0x{b:02x}")
            status = b
        elif status is None:
            raise MalformedFile("running status before any status byte")
        kind = status & 0xF0
        data = r.take(_DATA_BYTES[kind])
        if kind == _NOTE_ON:
            pitch, velocity = data
            events.append((tick, velocity > 0, pitch))
        elif kind == _NOTE_OFF:
            events.append((tick, False, data[0]))
    return events, tick


def _pair_events(events, end_tick):
    """Match note-on and note-off edges into (onset, off, pitch) triples."""
    # Offs sort before ons at the same tick so legato re-strikes pair cleanly.
    events = sorted(events, key=lambda e: (e[0], e[1]))
    open_notes: dict = {}
    raw = []
    for tick, is_on, pitch in events:
        if is_on:
            open_notes.setdefault(pitch, []).append(tick)
        else:
            stack = open_notes.get(pitch)
            if stack:
                on_tick = stack.pop(0)
                if tick > on_tick:
                    raw.append((on_tick, tick, pitch))
    # Notes left hanging at end of track are closed at the final tick.
    for pitch, ticks in open_notes.items():
        for on_tick in ticks:
            if end_tick > on_tick:
                raw.append((on_tick, end_tick, pitch))
    return raw


def _resolve_overlaps(raw):
    """Enforce monophony: same onsets keep the highest pitch, others truncate."""
    raw.sort(key=lambda n: (n[0], -n[2], n[1]))
    monophonic = []
    for on, off, pitch in raw:
        if monophonic and monophonic[-1][0] == on:
            continue  # same onset, a higher pitch was already kept
        monophonic.append([on, off, pitch])
    for cur, nxt in zip(monophonic, monophonic[1:]):
        if cur[1] > nxt[0]:
            cur[1] = nxt[0]
    return [(on, off, pitch) for on, off, pitch in monophonic if off > on]


def parse_midi(data: bytes, melody_id: str) -> Melody:
    """Parse raw standard-MIDI-file bytes into a Melody.

    Raises MalformedFile for structural problems, UnsupportedDivision for
    SMPTE timing and EmptyMelody when no note survives pairing.
    """
    r = _Reader(data)
    if r.take(4) != b"MThd":
        raise MalformedFile("missing MThd header")
    header_len = r.u32()
    if header_len < 6:
        raise MalformedFile("MThd chunk too short")
    fmt = r.u16()
    n_tracks = r.u16()
    division = r.u16()
    r.take(header_len - 6)
    if fmt not in (0, 1):
        raise MalformedFile(f"unsupported MIDI format {fmt}")
    if division & 0x8000:
        raise UnsupportedDivision("SMPTE division is not supported")
    if division == 0:
        raise MalformedFile("zero ticks per quarter note")

    events = []
    end_tick = 0
    tracks_seen = 0
    while r.remaining() > 0:
        if r.remaining() < 8:
            raise MalformedFile("trailing bytes too short for a chunk header")
        tag = r.take(4)
        body = r.take(r.u32())
        if tag != b"MTrk":
            continue  # alien chunks are skipped per the SMF spec
        track_events, track_end = _parse_track(body)
        events.extend(track_events)
        end_tick = max(end_tick, track_end)
        tracks_seen += 1
    if tracks_seen == 0 or tracks_seen < n_tracks:
        raise MalformedFile(f"expected {n_tracks} tracks, found {tracks_seen}")

    resolved = _resolve_overlaps(_pair_events(events, end_tick))
    if not resolved:
        raise EmptyMelody(f"no notes in {melody_id!r}")
    notes = [
        NoteEvent(pitch, Fraction(on, division), Fraction(off - on, division))
        for on, off, pitch in resolved
    ]
    return Melody(melody_id, notes)


def _vlq_bytes(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def melody_to_midi_bytes(melody: Melody, ppq: int = 480) -> bytes:
    """Serialize a Melody as a single-track format-0 file.

    Onsets are quantized to the given PPQ; the output is deterministic so
    equal melodies always serialize to identical bytes.
    """
    edges = []
    for note in melody.notes:
        on = round(note.onset * ppq)
        off = round(note.end * ppq)
        if off <= on:
            off = on + 1
        edges.append((on, 1, note.pitch))
        edges.append((off, 0, note.pitch))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))

    track = bytearray()
    last = 0
    for tick, is_on, pitch in edges:
        track += _vlq_bytes(tick - last)
        track += bytes([_NOTE_ON if is_on else _NOTE_OFF, pitch, 64 if is_on else 0])
        last = tick
    track += b"\x00\xff\x2f\x00"

    header = struct.pack(">4sIHHH", b"MThd", 6, 0, 1, ppq)
    return header + struct.pack(">4sI", b"MTrk", len(track)) + bytes(track)
