"""Leave-one-out cross-validation and the full parameter grid search.

A pipeline configuration picks one of four representation/segmentation
combos (wr+ws shares a single scale, wr+lbdm crosses scale with
threshold, vr+ws uses the scale only to segment, vr+lbdm has no scale),
plus k, the metric and the sampling rate. The default grid is 8 scales,
8 LBDM thresholds, k = 1..5 and both metrics: 880 configurations.

Segments are derived once per melody and combo and reused across folds;
the zero-padding length n is the longest segment in the whole corpus for
that combo, so every fold shares it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import backends
from .classifier import MetricKind, _vote_melody
from .corpus import LabeledCorpus
from .errors import DegenerateCorpus, ScaleExceedsSignal
from .midi_ingest import Melody
from .pitch_signal import sample_melody
from .segmentation import Segment, extract_segments, lbdm_boundaries, positive_maxima
from .wavelet import cwt_row

REPRESENTATIONS = ("vr", "wr")
SEGMENTATIONS = ("ws", "lbdm")
THRESHOLDS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
SCALE_INDICES = tuple(range(1, 9))
KS = (1, 2, 3, 4, 5)
METRICS = (MetricKind.EUCLIDEAN, MetricKind.CITYBLOCK)
#: Fixed combo ordering used in every output table.
COMBOS = (("wr", "ws"), ("wr", "lbdm"), ("vr", "ws"), ("vr", "lbdm"))


@dataclass(frozen=True)
class PipelineConfig:
    """One grid-search point.

    ``scale_index`` (1..8, meaning a kernel of 2**index samples) must be
    present exactly when the wavelet is involved (wr representation or ws
    segmentation); ``threshold`` exactly when segmentation is lbdm.
    """

    representation: str
    segmentation: str
    scale_index: Optional[int] = None
    threshold: Optional[float] = None
    k: int = 1
    metric: MetricKind = MetricKind.CITYBLOCK
    rate: int = 8

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.segmentation not in SEGMENTATIONS:
            raise ValueError(f"unknown segmentation {self.segmentation!r}")
        needs_scale = self.representation == "wr" or self.segmentation == "ws"
        if needs_scale:
            if self.scale_index is None:
                raise ValueError("this combo requires a scale index")
            if self.scale_index not in SCALE_INDICES:
                raise ValueError(f"scale index {self.scale_index} outside 1..8")
        elif self.scale_index is not None:
            raise ValueError("vr+lbdm takes no scale index")
        if self.segmentation == "lbdm":
            if self.threshold is None:
                raise ValueError("lbdm segmentation requires a threshold")
            if not 0.0 <= self.threshold <= 1.0:
                raise ValueError(f"threshold {self.threshold} outside [0, 1]")
        elif self.threshold is not None:
            raise ValueError("ws segmentation takes no threshold")
        if self.k not in KS:
            raise ValueError(f"k must be in 1..5, got {self.k}")
        object.__setattr__(self, "metric", MetricKind(self.metric))
        if self.rate < 1:
            raise ValueError(f"rate must be >= 1, got {self.rate}")

    @property
    def scale_samples(self) -> Optional[int]:
        return None if self.scale_index is None else 2**self.scale_index


@dataclass
class EvalResult:
    """LOOCV outcome of one configuration.

    ``accuracy`` is None when the configuration could not be evaluated on
    the corpus (some melody is too short for the requested scale).
    """

    config: PipelineConfig
    accuracy: Optional[float]
    predictions: List[Tuple[str, str, str]] = field(default_factory=list)


def run_pipeline(melody: Melody, config: PipelineConfig) -> List[Segment]:
    """Sample, filter, segment and represent one melody."""
    signal = sample_melody(melody, config.rate)
    row = None
    if config.representation == "wr" or config.segmentation == "ws":
        row = cwt_row(signal.samples, config.scale_samples)
    if config.segmentation == "ws":
        cuts = positive_maxima(row)
    else:
        cuts = lbdm_boundaries(melody, config.threshold, config.rate)
    series = row if config.representation == "wr" else signal.samples
    return extract_segments(series, cuts, config.representation, melody.id)


@dataclass
class _SegmentTable:
    """All segments of a corpus for one combo, packed for the kernels."""

    pack: Tuple[np.ndarray, np.ndarray]
    per_melody: List[Tuple[int, int]]  # segment index range per melody
    melody_of: np.ndarray
    label_idx: np.ndarray
    n: int


def _check_corpus(corpus: LabeledCorpus) -> List[str]:
    labels = sorted(set(m.label for m in corpus.melodies))
    if len(corpus.melodies) < 2 or len(labels) < 2:
        raise DegenerateCorpus(
            f"need >= 2 melodies and >= 2 labels, got "
            f"{len(corpus.melodies)} melodies, {len(labels)} labels"
        )
    return labels


def _build_table(
    segments_per_melody: List[List[Segment]], corpus: LabeledCorpus, labels: List[str]
) -> _SegmentTable:
    label_to_idx = {label: i for i, label in enumerate(labels)}
    values: List[np.ndarray] = []
    per_melody: List[Tuple[int, int]] = []
    melody_of: List[int] = []
    label_idx: List[int] = []
    for mi, (melody, segments) in enumerate(zip(corpus.melodies, segments_per_melody)):
        start = len(values)
        for seg in segments:
            values.append(seg.values)
            melody_of.append(mi)
            label_idx.append(label_to_idx[melody.label])
        per_melody.append((start, len(values)))
    n = max(len(v) for v in values)
    return _SegmentTable(
        pack=backends.pack(values),
        per_melody=per_melody,
        melody_of=np.array(melody_of, dtype=np.int64),
        label_idx=np.array(label_idx, dtype=np.int64),
        n=n,
    )


def _fold_predictions(
    table: _SegmentTable, metric: MetricKind, ks: Sequence[int], n_labels: int
) -> Dict[int, List[int]]:
    """Predicted label index per melody, for every requested k.

    Each melody is one fold: its segments are the queries and every other
    melody's segments are the training set. The distance matrix rows are
    computed per fold, so memory stays proportional to one melody.
    """
    flat, offsets = table.pack
    predictions: Dict[int, List[int]] = {k: [] for k in ks}
    for mi, (seg_lo, seg_hi) in enumerate(table.per_melody):
        query_pack = (
            np.ascontiguousarray(flat[offsets[seg_lo] : offsets[seg_hi]]),
            np.ascontiguousarray(offsets[seg_lo : seg_hi + 1] - offsets[seg_lo]),
        )
        rows = backends.pairwise(query_pack, table.pack, metric.value)
        train_mask = table.melody_of != mi
        sub = rows[:, train_mask]
        train_labels = table.label_idx[train_mask]
        for k in ks:
            predictions[k].append(_vote_melody(sub, train_labels, k, n_labels))
    return predictions


def loocv(corpus: LabeledCorpus, config: PipelineConfig) -> EvalResult:
    """Leave-one-out accuracy of a single configuration."""
    labels = _check_corpus(corpus)
    segments = [run_pipeline(m, config) for m in corpus.melodies]
    table = _build_table(segments, corpus, labels)
    predictions = _fold_predictions(table, config.metric, [config.k], len(labels))
    return _result_from_predictions(corpus, config, labels, predictions[config.k])


def _result_from_predictions(
    corpus: LabeledCorpus,
    config: PipelineConfig,
    labels: List[str],
    predicted_idx: List[int],
) -> EvalResult:
    rows = []
    correct = 0
    for melody, pi in zip(corpus.melodies, predicted_idx):
        predicted = labels[pi]
        rows.append((melody.id, melody.label, predicted))
        if predicted == melody.label:
            correct += 1
    return EvalResult(config, correct / len(corpus.melodies), rows)


def default_grid(rate: int = 8) -> List[Tuple[str, str, Optional[int], Optional[float]]]:
    """Canonical (representation, segmentation, scale index, threshold) axis."""
    combos: List[Tuple[str, str, Optional[int], Optional[float]]] = []
    for rep, seg in COMBOS:
        if seg == "ws":
            combos.extend((rep, seg, si, None) for si in SCALE_INDICES)
        elif rep == "wr":
            combos.extend(
                (rep, seg, si, t) for si in SCALE_INDICES for t in THRESHOLDS
            )
        else:
            combos.extend((rep, seg, None, t) for t in THRESHOLDS)
    return combos


SummaryKey = Tuple[MetricKind, str, str, int]


def summarize(
    results: Sequence[EvalResult],
) -> Dict[SummaryKey, Tuple[Optional[float], Optional[float]]]:
    """Best and worst accuracy over the scale/threshold axis per table cell."""
    cells: Dict[SummaryKey, List[float]] = {}
    for result in results:
        cfg = result.config
        key = (cfg.metric, cfg.representation, cfg.segmentation, cfg.k)
        cells.setdefault(key, [])
        if result.accuracy is not None:
            cells[key].append(result.accuracy)
    summary: Dict[SummaryKey, Tuple[Optional[float], Optional[float]]] = {}
    for key, values in cells.items():
        if values:
            summary[key] = (max(values), min(values))
        else:
            summary[key] = (None, None)
    return summary


def grid_search(
    corpus: LabeledCorpus, rate: int = 8
) -> Tuple[List[EvalResult], Dict[SummaryKey, Tuple[Optional[float], Optional[float]]]]:
    """Evaluate the full grid with LOOCV.

    Segments, the padding length and per-fold distance rows are shared
    across k, and distances are shared across k per metric, so the grid
    costs 88 segmentations and 176 distance sweeps rather than 880.
    Configurations whose scale exceeds some melody's signal are reported
    with accuracy None.
    """
    labels = _check_corpus(corpus)
    results: List[EvalResult] = []
    for rep, seg, scale_index, threshold in default_grid(rate):
        base = dict(
            representation=rep,
            segmentation=seg,
            scale_index=scale_index,
            threshold=threshold,
            rate=rate,
        )
        try:
            segments = [
                run_pipeline(m, PipelineConfig(k=1, metric=MetricKind.CITYBLOCK, **base))
                for m in corpus.melodies
            ]
        except ScaleExceedsSignal:
            for metric in METRICS:
                for k in KS:
                    results.append(
                        EvalResult(PipelineConfig(k=k, metric=metric, **base), None)
                    )
            continue
        table = _build_table(segments, corpus, labels)
        for metric in METRICS:
            predictions = _fold_predictions(table, metric, KS, len(labels))
            for k in KS:
                config = PipelineConfig(k=k, metric=metric, **base)
                results.append(
                    _result_from_predictions(corpus, config, labels, predictions[k])
                )
    ordered = _reorder_metric_blocks(results)
    return ordered, summarize(ordered)


def _reorder_metric_blocks(results: List[EvalResult]) -> List[EvalResult]:
    """Fix row order: combo axis, then metric (euclidean, cityblock), then k."""
    def key(result: EvalResult):
        cfg = result.config
        return (
            COMBOS.index((cfg.representation, cfg.segmentation)),
            cfg.scale_index or 0,
            cfg.threshold or 0.0,
            METRICS.index(cfg.metric),
            cfg.k,
        )

    return sorted(results, key=key)
