"""Density-normalized equal-width histogram of a distance table."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .store import DistanceTable


class DegenerateRange(ValueError):
    """All samples equal, or fewer than two samples: no histogram possible."""


@dataclass
class Histogram:
    edges: np.ndarray      # bins + 1 boundaries, first/last == min/max observed
    centers: np.ndarray    # bin midpoints, the fit abscissae
    densities: np.ndarray  # probability density per bin
    bin_width: float
    n_samples: int


def build_histogram(table: DistanceTable | np.ndarray, bins: int = 100) -> Histogram:
    """Histogram whose density integrates to 1 over [min, max] of the data.

    Samples land in bin floor((d - min) / bin_width); the maximum value is
    assigned to the last bin so every sample is counted exactly once.
    """
    if isinstance(table, DistanceTable):
        d = table.distances
    else:
        d = np.asarray(table, dtype=np.float64)
    n = d.size
    if n < 2:
        raise DegenerateRange(f"need at least 2 samples, got {n}")
    lo = float(d.min())
    hi = float(d.max())
    if hi <= lo:
        raise DegenerateRange("all distances identical, no spread to bin")
    if bins < 1:
        raise ValueError(f"bins must be positive, got {bins}")
    width = (hi - lo) / bins
    idx = np.floor((d - lo) / width).astype(np.int64)
    np.clip(idx, 0, bins - 1, out=idx)
    counts = np.bincount(idx, minlength=bins)
    edges = np.linspace(lo, hi, bins + 1)
    return Histogram(
        edges=edges,
        centers=(edges[:-1] + edges[1:]) / 2.0,
        densities=counts / (n * width),
        bin_width=width,
        n_samples=n,
    )
