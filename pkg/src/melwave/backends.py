"""Numerical kernels with a compiled fast path and a numpy fallback.

The hot loops live in the optional Cython extension ``melwave._speedups``:
Haar coefficient rows and pairwise zero-padded segment distances. When the
extension is missing (or ``MELWAVE_NO_SPEEDUPS`` is set) equivalent
numpy/scipy implementations take over. Both paths agree within floating
point noise; ``benchmarks/bench_backends.py`` compares their speed.
"""

from __future__ import annotations

import math
import os
from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

try:
    from . import _speedups
except ImportError:  # pragma: no cover - build without the extension
    _speedups = None

_DISABLED = os.environ.get("MELWAVE_NO_SPEEDUPS", "") not in ("", "0")
_active = _speedups if (_speedups is not None and not _DISABLED) else None

_METRIC_CODES = {"cityblock": 0, "euclidean": 1}


def backend_name() -> str:
    """Name of the kernel backend selected at import time."""
    return "compiled" if _active is not None else "numpy"


def haar_row_numpy(padded: np.ndarray, pad: int, out_len: int, scale: int) -> np.ndarray:
    """Correlate the padded signal with a unit-energy Haar kernel."""
    amp = 1.0 / math.sqrt(scale)
    half = scale // 2
    kernel = np.concatenate([np.full(half, amp), np.full(half, -amp)])
    full = np.correlate(padded, kernel, mode="valid")
    return full[pad : pad + out_len]


def haar_row(padded: np.ndarray, pad: int, out_len: int, scale: int) -> np.ndarray:
    """Coefficient row for one scale; position u = kernel left edge at u."""
    padded = np.ascontiguousarray(padded, dtype=np.float64)
    if _active is not None:
        return _active.haar_row(padded, pad, out_len, scale)
    return haar_row_numpy(padded, pad, out_len, scale)


def pack(arrays: Sequence[np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Flatten a list of 1-D arrays into (flat values, int64 offsets)."""
    offsets = np.zeros(len(arrays) + 1, dtype=np.int64)
    for i, arr in enumerate(arrays):
        offsets[i + 1] = offsets[i] + len(arr)
    if arrays:
        flat = np.ascontiguousarray(np.concatenate(arrays), dtype=np.float64)
    else:
        flat = np.empty(0, dtype=np.float64)
    return flat, offsets


def _unpack_padded(flat: np.ndarray, offsets: np.ndarray, width: int) -> np.ndarray:
    n = len(offsets) - 1
    dense = np.zeros((n, width), dtype=np.float64)
    for i in range(n):
        seg = flat[offsets[i] : offsets[i + 1]]
        dense[i, : len(seg)] = seg
    return dense


def pairwise_numpy(
    pack_a: Tuple[np.ndarray, np.ndarray],
    pack_b: Tuple[np.ndarray, np.ndarray],
    metric: str,
) -> np.ndarray:
    """Zero-pad both segment sets to a common width and run scipy cdist."""
    flat_a, off_a = pack_a
    flat_b, off_b = pack_b
    width_a = int(np.diff(off_a).max(initial=0))
    width_b = int(np.diff(off_b).max(initial=0))
    width = max(width_a, width_b, 1)
    dense_a = _unpack_padded(flat_a, off_a, width)
    dense_b = _unpack_padded(flat_b, off_b, width)
    return cdist(dense_a, dense_b, metric=metric)


def pairwise(
    pack_a: Tuple[np.ndarray, np.ndarray],
    pack_b: Tuple[np.ndarray, np.ndarray],
    metric: str,
) -> np.ndarray:
    """Distance matrix between two packed segment lists.

    Zero-padding at the tail never changes a distance, so the ragged
    compiled kernel and the padded scipy fallback compute the same matrix.
    """
    if metric not in _METRIC_CODES:
        raise ValueError(f"unknown metric {metric!r}")
    if _active is not None:
        flat_a, off_a = pack_a
        flat_b, off_b = pack_b
        return _active.pairwise_ragged(flat_a, off_a, flat_b, off_b, _METRIC_CODES[metric])
    return pairwise_numpy(pack_a, pack_b, metric)
