"""Haar kernels, mirror padding, the discretized CWT and maxima picking.

The kernel at scale s (an even number of samples) is +1/sqrt(s) on its
first half and -1/sqrt(s) on its second, so it has zero average and unit
energy. With that sign convention a fall of average pitch produces a
positive coefficient, which is what the maxima-based segmentation looks
for. Coefficients are computed on a mirror-padded copy of the signal and
cropped back to the original length, which makes them exactly invariant
under transposition of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from . import backends
from .errors import OddScale, PadTooLarge, ScaleExceedsSignal, ScaleTooSmall

#: The dyadic scale set used throughout: 2**1 .. 2**8 samples,
#: i.e. a quarter beat up to 32 quarter notes at 8 samples per quarter note.
DYADIC_SCALES: Tuple[int, ...] = tuple(2**j for j in range(1, 9))


@dataclass
class HaarKernel:
    """Step kernel of ``scale`` samples: +1/sqrt(s) then -1/sqrt(s)."""

    scale: int
    values: np.ndarray


@dataclass
class WaveletCoefficients:
    """Coefficient rows aligned with the source signal.

    ``matrix`` has one row per computed scale, each exactly as long as the
    source signal. Scales too large to produce a full unclipped row are
    listed in ``skipped`` instead.
    """

    scales: Tuple[int, ...]
    matrix: np.ndarray
    skipped: Tuple[int, ...] = ()

    def row(self, scale: int) -> np.ndarray:
        if scale in self.skipped:
            raise ScaleExceedsSignal(f"scale {scale} was skipped for this signal")
        return self.matrix[self.scales.index(scale)]


def _check_scale(scale: int) -> None:
    if scale < 2:
        raise ScaleTooSmall(f"scale must be >= 2, got {scale}")
    if scale % 2:
        raise OddScale(f"scale must be even, got {scale}")


def haar_kernel(scale: int) -> HaarKernel:
    """Build the Haar kernel for an even scale of at least 2 samples."""
    _check_scale(scale)
    amp = 1.0 / math.sqrt(scale)
    half = scale // 2
    values = np.concatenate([np.full(half, amp), np.full(half, -amp)])
    return HaarKernel(scale, values)


def mirror_pad(signal: np.ndarray, pad: int) -> np.ndarray:
    """Extend both ends with a mirror image of the signal.

    The reflection duplicates the edge sample: [1,2,3] padded by 2 becomes
    [2,1, 1,2,3, 3,2]. ``pad`` may not exceed the signal length (only one
    reversed copy is available on each side).
    """
    arr = np.asarray(signal, dtype=np.float64)
    if pad < 0:
        raise ValueError(f"negative pad {pad}")
    if pad > len(arr):
        raise PadTooLarge(f"pad {pad} exceeds signal length {len(arr)}")
    if pad == 0:
        return arr.copy()
    return np.concatenate([arr[:pad][::-1], arr, arr[-pad:][::-1]])


def _scale_fits(scale: int, length: int) -> bool:
    # A full unclipped row needs the kernel to fit at every position
    # u = 0..L-1 of the mirror-padded signal, i.e. scale <= pad + 1 with
    # pad = min(scale, length).
    return scale <= min(scale, length) + 1


def cwt_row(signal: np.ndarray, scale: int) -> np.ndarray:
    """One coefficient row, length-preserving, for a single scale."""
    _check_scale(scale)
    arr = np.asarray(signal, dtype=np.float64)
    length = len(arr)
    if not _scale_fits(scale, length):
        raise ScaleExceedsSignal(
            f"scale {scale} cannot produce a full row for a length-{length} signal"
        )
    pad = min(scale, length)
    padded = mirror_pad(arr, pad)
    return backends.haar_row(padded, pad, length, scale)


def cwt_haar(signal: np.ndarray, scales: Sequence[int]) -> WaveletCoefficients:
    """Haar CWT of a signal at the given even scales.

    Scales whose kernel cannot slide over every position without clipping
    are skipped and reported in the result; the remaining scales are still
    computed.
    """
    arr = np.asarray(signal, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("signal must be a non-empty 1-D array")
    for scale in scales:
        _check_scale(scale)
    computed: List[int] = []
    skipped: List[int] = []
    rows: List[np.ndarray] = []
    for scale in scales:
        if _scale_fits(scale, len(arr)):
            computed.append(scale)
            rows.append(cwt_row(arr, scale))
        else:
            skipped.append(scale)
    matrix = np.vstack(rows) if rows else np.empty((0, len(arr)))
    return WaveletCoefficients(tuple(computed), matrix, tuple(skipped))


def local_maxima(series: np.ndarray) -> List[int]:
    """Indices i with series[i-1] < series[i] >= series[i+1].

    On a plateau only its first index qualifies; endpoints never do.
    """
    arr = np.asarray(series, dtype=np.float64)
    if arr.size < 3:
        return []
    rising = arr[1:-1] > arr[:-2]
    falling = arr[1:-1] >= arr[2:]
    return [int(i) + 1 for i in np.flatnonzero(rising & falling)]
