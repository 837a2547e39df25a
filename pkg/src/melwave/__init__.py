"""Haar-wavelet filtering, segmentation and tune-family classification of
symbolic melodies."""

from .backends import backend_name
from .classifier import LabeledSegment, MetricKind, classify_melody, distance, pad_to
from .corpus import LabeledCorpus, load_corpus, synth_corpus, write_corpus
from .errors import MelwaveError
from .evaluator import (
    EvalResult,
    PipelineConfig,
    default_grid,
    grid_search,
    loocv,
    run_pipeline,
    summarize,
)
from .midi_ingest import Melody, NoteEvent, melody_to_midi_bytes, parse_midi
from .pitch_signal import PitchSignal, normalize, rest_fill, sample_melody
from .segmentation import (
    Segment,
    extract_segments,
    lbdm_boundaries,
    lbdm_profile,
    positive_maxima,
    wavelet_boundaries,
)
from .wavelet import (
    DYADIC_SCALES,
    HaarKernel,
    WaveletCoefficients,
    cwt_haar,
    cwt_row,
    haar_kernel,
    local_maxima,
    mirror_pad,
)

__version__ = "0.1.0"

__all__ = [
    "DYADIC_SCALES",
    "EvalResult",
    "HaarKernel",
    "LabeledCorpus",
    "LabeledSegment",
    "Melody",
    "MelwaveError",
    "MetricKind",
    "NoteEvent",
    "PipelineConfig",
    "PitchSignal",
    "Segment",
    "WaveletCoefficients",
    "backend_name",
    "classify_melody",
    "cwt_haar",
    "cwt_row",
    "default_grid",
    "distance",
    "extract_segments",
    "grid_search",
    "haar_kernel",
    "lbdm_boundaries",
    "lbdm_profile",
    "load_corpus",
    "local_maxima",
    "loocv",
    "melody_to_midi_bytes",
    "mirror_pad",
    "normalize",
    "pad_to",
    "parse_midi",
    "positive_maxima",
    "rest_fill",
    "run_pipeline",
    "sample_melody",
    "summarize",
    "synth_corpus",
    "wavelet_boundaries",
    "write_corpus",
]
