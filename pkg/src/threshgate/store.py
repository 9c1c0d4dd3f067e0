"""Readers and writers for embedding stores, distance tables and label tables.

The binary embedding store keeps the numeric core decoupled from whatever
model produced the vectors.  Distance and label tables are plain CSV-like
text so they can be inspected and diffed by hand.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, TextIO

import numpy as np

MAGIC = b"EMB1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_U32 = struct.Struct("<I")


class StoreError(ValueError):
    """Base class for store/table format violations."""


class BadMagic(StoreError):
    pass


class TruncatedFile(StoreError):
    pass


class DimMismatch(StoreError):
    pass


class DuplicateId(StoreError):
    pass


class NonFiniteValue(StoreError):
    pass


class MalformedRow(StoreError):
    pass


class OutOfRange(StoreError):
    pass


def _check_id(id_: str) -> None:
    if not id_:
        raise StoreError("empty id")
    if "\n" in id_ or "," in id_:
        raise StoreError(f"id contains newline or comma: {id_!r}")


@dataclass(eq=False)
class EmbeddingRecord:
    """One id together with its k-dimensional float32 vector."""

    id: str
    vector: np.ndarray

    def __post_init__(self) -> None:
        _check_id(self.id)
        self.vector = np.asarray(self.vector, dtype=np.float32)
        if self.vector.ndim != 1:
            raise StoreError("vector must be one-dimensional")
        if not np.all(np.isfinite(self.vector)):
            raise NonFiniteValue(f"non-finite value in vector for id {self.id!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingRecord):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.vector, other.vector)


@dataclass(eq=False)
class EmbeddingStore:
    """Ordered collection of embedding records sharing one dimension."""

    dim: int
    records: list[EmbeddingRecord] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.dim <= 0:
            raise StoreError(f"dimension must be positive, got {self.dim}")
        seen: set[str] = set()
        for rec in self.records:
            if rec.vector.shape[0] != self.dim:
                raise DimMismatch(
                    f"record {rec.id!r} has length {rec.vector.shape[0]}, store dim is {self.dim}"
                )
            if rec.id in seen:
                raise DuplicateId(f"duplicate id {rec.id!r}")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingStore):
            return NotImplemented
        return self.dim == other.dim and self.records == other.records

    def matrix(self) -> np.ndarray:
        """All vectors stacked into an (n, dim) float32 array."""
        if not self.records:
            return np.empty((0, self.dim), dtype=np.float32)
        return np.stack([rec.vector for rec in self.records])


@dataclass(eq=False)
class DistanceTable:
    """Ordered (id, cosine distance) pairs for one query."""

    entries: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        checked = []
        for id_, d in self.entries:
            _check_id(id_)
            d = float(d)
            if not math.isfinite(d) or d < 0.0 or d > 2.0:
                raise OutOfRange(f"distance {d!r} for id {id_!r} outside [0, 2]")
            if id_ in seen:
                raise DuplicateId(f"duplicate id {id_!r}")
            seen.add(id_)
            checked.append((id_, d))
        self.entries = checked

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DistanceTable):
            return NotImplemented
        return self.entries == other.entries

    @property
    def ids(self) -> list[str]:
        return [id_ for id_, _ in self.entries]

    @property
    def distances(self) -> np.ndarray:
        return np.array([d for _, d in self.entries], dtype=np.float64)


def write_embedding_store(store: EmbeddingStore, sink: BinaryIO) -> None:
    """Serialize a store in the little-endian EMB1 layout."""
    sink.write(_HEADER.pack(MAGIC, FORMAT_VERSION, store.dim, len(store.records)))
    for rec in store.records:
        id_bytes = rec.id.encode("utf-8")
        sink.write(_U32.pack(len(id_bytes)))
        sink.write(id_bytes)
        sink.write(rec.vector.astype("<f4", copy=False).tobytes())


def _read_exact(source: BinaryIO, n: int, what: str) -> bytes:
    data = source.read(n)
    if len(data) != n:
        raise TruncatedFile(f"unexpected end of stream while reading {what}")
    return data


def read_embedding_store(source: BinaryIO) -> EmbeddingStore:
    """Parse the EMB1 layout, validating every invariant on the way."""
    magic, version, dim, count = _HEADER.unpack(_read_exact(source, _HEADER.size, "header"))
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise StoreError(f"unsupported format version {version}")
    if dim <= 0:
        raise StoreError(f"non-positive dimension {dim}")
    records = []
    seen: set[str] = set()
    for i in range(count):
        (id_len,) = _U32.unpack(_read_exact(source, _U32.size, f"id length of record {i}"))
        id_ = _read_exact(source, id_len, f"id of record {i}").decode("utf-8")
        if id_ in seen:
            raise DuplicateId(f"duplicate id {id_!r}")
        seen.add(id_)
        raw = _read_exact(source, 4 * dim, f"vector of record {i!r} ({id_!r})")
        vec = np.frombuffer(raw, dtype="<f4").astype(np.float32)
        if not np.all(np.isfinite(vec)):
            raise NonFiniteValue(f"non-finite value in record {id_!r}")
        records.append(EmbeddingRecord(id_, vec))
    if source.read(1):
        raise StoreError("trailing bytes after final record")
    return EmbeddingStore(dim=dim, records=records)


def format_sig9(x: float) -> str:
    """Render a float with 9 significant digits."""
    return f"{x:.9g}"


def write_distance_table(table: DistanceTable, sink: TextIO) -> None:
    sink.write("id,distance\n")
    for id_, d in table.entries:
        sink.write(f"{id_},{format_sig9(d)}\n")


def _rows(text: TextIO, header: str) -> Iterable[tuple[int, list[str]]]:
    first = True
    for lineno, line in enumerate(text, start=1):
        line = line.rstrip("\n")
        if first:
            first = False
            if line != header:
                raise MalformedRow(f"expected header {header!r}, got {line!r}")
            continue
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise MalformedRow(f"line {lineno}: expected 2 fields, got {len(fields)}")
        yield lineno, fields


def read_distance_table(text: TextIO) -> DistanceTable:
    entries = []
    for lineno, (id_, raw) in ((ln, f) for ln, f in _rows(text, "id,distance")):
        try:
            d = float(raw)
        except ValueError as exc:
            raise MalformedRow(f"line {lineno}: bad distance {raw!r}") from exc
        if not math.isfinite(d) or d < 0.0 or d > 2.0:
            raise OutOfRange(f"line {lineno}: distance {raw} outside [0, 2]")
        entries.append((id_, d))
    return DistanceTable(entries)


def read_labels(text: TextIO) -> dict[str, str]:
    labels: dict[str, str] = {}
    for lineno, (id_, label) in ((ln, f) for ln, f in _rows(text, "id,label")):
        if not id_ or not label:
            raise MalformedRow(f"line {lineno}: empty id or label")
        if id_ in labels:
            raise DuplicateId(f"line {lineno}: duplicate id {id_!r}")
        labels[id_] = label
    return labels
