"""Cosine distances between stored image vectors and a query vector."""
from __future__ import annotations

import numpy as np

from .store import DistanceTable, EmbeddingStore


class ZeroNorm(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def _reduce(values: np.ndarray) -> float:
    # np.add.reduce over a float64 buffer: deterministic for fixed input.
    return float(np.add.reduce(values, dtype=np.float64))


def cosine_distance(u, v) -> float:
    """1 - cos(u, v), in [0, 2]; accumulation happens in 64-bit floats."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise LengthMismatch(f"vector lengths differ: {u.shape} vs {v.shape}")
    nu = _reduce(u * u)
    nv = _reduce(v * v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroNorm("cosine distance undefined for zero-norm vector")
    d = 1.0 - _reduce(u * v) / (np.sqrt(nu) * np.sqrt(nv))
    # clamp away rounding excursions outside the mathematical range
    return min(2.0, max(0.0, d))


def compute_distances(store: EmbeddingStore, query, query_id: str | None = None) -> DistanceTable:
    """Distance of every record to the query, in store order."""
    q = np.asarray(query, dtype=np.float64)
    if q.ndim != 1 or q.shape[0] != store.dim:
        raise LengthMismatch(f"query length {q.shape} does not match store dim {store.dim}")
    qn = _reduce(q * q)
    if qn == 0.0:
        raise ZeroNorm("query vector has zero norm")
    entries = []
    for rec in store.records:
        v = rec.vector.astype(np.float64)
        nv = _reduce(v * v)
        if nv == 0.0:
            raise ZeroNorm(f"record {rec.id!r} has zero norm")
        d = 1.0 - _reduce(q * v) / (np.sqrt(qn) * np.sqrt(nv))
        entries.append((rec.id, min(2.0, max(0.0, d))))
    return DistanceTable(entries)


def sort_by_distance(table: DistanceTable) -> DistanceTable:
    """Ascending by distance, ties broken by id; idempotent."""
    return DistanceTable(sorted(table.entries, key=lambda e: (e[1], e[0])))
