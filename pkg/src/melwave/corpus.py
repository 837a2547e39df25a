"""Labeled corpora: loading MIDI directories and generating synthetic ones.

A corpus on disk is a directory of MIDI files plus a sidecar CSV with
header ``filename,family``. The synthetic generator builds tune families
the same way the real data is believed to vary: each family is a random
diatonic prototype and each variant is a transposed copy with occasional
ornament figures, fully determined by the seed.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List

from .errors import DuplicateEntry, MissingFile, UnlabeledFile
from .midi_ingest import Melody, NoteEvent, melody_to_midi_bytes, parse_midi

_DURATIONS = (Fraction(1, 2), Fraction(1), Fraction(2))
_MAJOR_STEPS = (0, 2, 4, 5, 7, 9, 11)
#: Diatonic walk range; transposition (+-12 max) and ornaments (+-2) stay
#: inside the generator's pitch bounds of [36, 96].
_WALK_LOW, _WALK_HIGH = 48, 84
_PITCH_LOW, _PITCH_HIGH = 36, 96


@dataclass
class LabeledCorpus:
    """Melodies that all carry a tune-family label."""

    melodies: List[Melody]

    def __post_init__(self):
        for melody in self.melodies:
            if melody.label is None:
                raise ValueError(f"melody {melody.id!r} has no label")

    @property
    def labels(self) -> List[str]:
        return sorted(set(m.label for m in self.melodies))

    def __len__(self) -> int:
        return len(self.melodies)


def read_label_file(label_path: Path) -> List[tuple]:
    """Rows of a ``filename,family`` CSV, with duplicate detection."""
    with open(label_path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["filename", "family"]:
            raise ValueError(f"{label_path}: expected header 'filename,family'")
        rows = []
        seen = set()
        for row in reader:
            if not row or not row[0].strip():
                continue
            filename, family = row[0].strip(), row[1].strip()
            if filename in seen:
                raise DuplicateEntry(f"{filename!r} listed twice in {label_path}")
            seen.add(filename)
            rows.append((filename, family))
    return rows


def load_corpus(directory, label_file=None) -> LabeledCorpus:
    """Parse every labeled MIDI file in a directory.

    The label file defaults to ``labels.csv`` inside the directory. Files
    present on disk but missing from the CSV (and vice versa) are errors.
    """
    directory = Path(directory)
    label_path = Path(label_file) if label_file else directory / "labels.csv"
    if not label_path.is_file():
        raise MissingFile(f"label file {label_path} not found")
    rows = read_label_file(label_path)
    labeled = {filename for filename, _ in rows}
    on_disk = sorted(
        p.name for p in directory.iterdir() if p.suffix.lower() in (".mid", ".midi")
    )
    for name in on_disk:
        if name not in labeled:
            raise UnlabeledFile(f"{name} has no row in {label_path}")
    melodies = []
    for filename, family in sorted(rows):
        path = directory / filename
        if not path.is_file():
            raise MissingFile(f"{path} listed in {label_path} but not found")
        melody = parse_midi(path.read_bytes(), Path(filename).stem)
        melody.label = family
        melodies.append(melody)
    return LabeledCorpus(melodies)


def _clamp(pitch: int) -> int:
    return max(_PITCH_LOW, min(_PITCH_HIGH, pitch))


def _diatonic_pitches() -> List[int]:
    return [
        p for p in range(_WALK_LOW, _WALK_HIGH + 1) if (p - 60) % 12 in _MAJOR_STEPS
    ]


def _prototype(rng: random.Random) -> List[tuple]:
    """Bounded random walk on the diatonic set: (pitch, duration) pairs."""
    pitches = _diatonic_pitches()
    idx = pitches.index(60) + rng.randint(-3, 3)
    notes = []
    for _ in range(rng.randint(16, 32)):
        notes.append((pitches[idx], rng.choice(_DURATIONS)))
        step = rng.choice((-2, -1, 1, 2))
        if not 0 <= idx + step < len(pitches):
            step = -step
        idx += step
    return notes


def _variant(
    prototype: List[tuple],
    rng: random.Random,
    transpose_range: int,
    ornament_prob: float,
) -> List[NoteEvent]:
    shift = rng.randint(-transpose_range, transpose_range) if transpose_range else 0
    events = []
    onset = Fraction(0)
    for pitch, duration in prototype:
        moved = _clamp(pitch + shift)
        if rng.random() < ornament_prob:
            half = duration / 2
            neighbour = _clamp(moved + rng.choice((-2, -1, 1, 2)))
            events.append(NoteEvent(moved, onset, half))
            events.append(NoteEvent(neighbour, onset + half, half))
        else:
            events.append(NoteEvent(moved, onset, duration))
        onset += duration
    return events


def synth_corpus(
    seed: int,
    families: int,
    variants: int,
    *,
    transpose_range: int = 7,
    ornament_prob: float = 0.15,
) -> LabeledCorpus:
    """Deterministic synthetic tune-family corpus.

    Every family is one prototype melody; every variant is the prototype
    transposed by a seeded amount with each note independently replaced by
    a two-note half-duration ornament figure with the given probability.
    """
    if families < 2:
        raise ValueError(f"need at least 2 families, got {families}")
    if variants < 1:
        raise ValueError(f"need at least 1 variant per family, got {variants}")
    if not 0.0 <= ornament_prob <= 1.0:
        raise ValueError(f"ornament probability {ornament_prob} outside [0, 1]")
    if transpose_range < 0:
        raise ValueError(f"negative transposition range {transpose_range}")
    rng = random.Random(seed)
    melodies = []
    for fi in range(families):
        label = f"fam{fi:02d}"
        prototype = _prototype(rng)
        for vi in range(variants):
            notes = _variant(prototype, rng, transpose_range, ornament_prob)
            melodies.append(Melody(f"{label}_v{vi:02d}", notes, label=label))
    return LabeledCorpus(melodies)


def write_corpus(corpus: LabeledCorpus, directory) -> List[Path]:
    """Write one MIDI file per melody plus labels.csv; returns the paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    rows = []
    for melody in sorted(corpus.melodies, key=lambda m: m.id):
        filename = f"{melody.id}.mid"
        path = directory / filename
        path.write_bytes(melody_to_midi_bytes(melody))
        paths.append(path)
        rows.append((filename, melody.label))
    label_path = directory / "labels.csv"
    with open(label_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["filename", "family"])
        writer.writerows(rows)
    paths.append(label_path)
    return paths
