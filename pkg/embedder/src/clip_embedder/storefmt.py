"""Writer for the EMB1 binary embedding store.

Layout (little-endian): magic "EMB1", u32 version (=1), u32 dim, u64 count,
then per record: u32 id byte length, UTF-8 id bytes, dim float32 values.
This mirrors the consumer's store format byte for byte; the file is the
interface between the two tools.
"""
from __future__ import annotations

import struct
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"EMB1"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIQ")
_U32 = struct.Struct("<I")


def write_store(path: str | Path, dim: int, records: Sequence[tuple[str, np.ndarray]]) -> None:
    """Write (id, vector) pairs; validates ids, lengths and finiteness."""
    if dim <= 0:
        raise ValueError(f"dimension must be positive, got {dim}")
    seen: set[str] = set()
    encoded = []
    for id_, vec in records:
        if not id_ or "," in id_ or "\n" in id_:
            raise ValueError(f"invalid id {id_!r}")
        if id_ in seen:
            raise ValueError(f"duplicate id {id_!r}")
        seen.add(id_)
        vec = np.asarray(vec, dtype=np.float32)
        if vec.shape != (dim,):
            raise ValueError(f"vector for {id_!r} has shape {vec.shape}, expected ({dim},)")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"non-finite value in vector for {id_!r}")
        encoded.append((id_.encode("utf-8"), vec))
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, dim, len(encoded)))
        for id_bytes, vec in encoded:
            fh.write(_U32.pack(len(id_bytes)))
            fh.write(id_bytes)
            fh.write(vec.astype("<f4", copy=False).tobytes())
