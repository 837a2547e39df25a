"""Exception hierarchy shared by all melwave modules."""


class MelwaveError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedFile(MelwaveError):
    """MIDI file with a broken header or chunk structure."""


class EmptyMelody(MelwaveError):
    """No resolvable notes in the input."""


class UnsupportedDivision(MelwaveError):
    """MIDI file uses SMPTE time division instead of ticks per quarter note."""


class EmptyVector(MelwaveError):
    """An operation that needs at least one value got an empty vector."""


class OddScale(MelwaveError):
    """Haar kernel scales must be even."""


class ScaleTooSmall(MelwaveError):
    """Haar kernel scales must be at least 2 samples."""


class PadTooLarge(MelwaveError):
    """Mirror padding cannot exceed the signal length."""


class ScaleExceedsSignal(MelwaveError):
    """Scale too large to produce a full, unclipped coefficient row."""


class TooFewNotes(MelwaveError):
    """Boundary-strength profiles need at least two notes."""


class SegmentTooLong(MelwaveError):
    """A segment is longer than the padding target length n."""


class EmptyTrainingSet(MelwaveError):
    """Classification requires at least one training segment."""


class DegenerateCorpus(MelwaveError):
    """Evaluation requires at least two melodies and two distinct labels."""


class MissingFile(MelwaveError):
    """A file listed in the label CSV does not exist on disk."""


class UnlabeledFile(MelwaveError):
    """A MIDI file on disk has no row in the label CSV."""


class DuplicateEntry(MelwaveError):
    """A filename appears more than once in the label CSV."""
