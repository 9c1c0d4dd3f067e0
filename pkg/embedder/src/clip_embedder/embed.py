"""Turn an image directory or a text prompt into an EMB1 embedding store."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .storefmt import write_store

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png", ".bmp", ".gif", ".webp", ".tiff"}


@dataclass
class EmbedResult:
    """What was written: record ids in file order plus any skipped paths."""

    ids: list[str]
    dim: int
    skipped: list[str] = field(default_factory=list)

    @property
    def n_embedded(self) -> int:
        return len(self.ids)


def find_images(root: str | Path) -> list[Path]:
    """Image files under root, recursive, sorted by relative posix path."""
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"{root} is not a directory")
    paths = [
        p for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    ]
    return sorted(paths, key=lambda p: p.relative_to(root).as_posix())


def embed_images(
    image_dir: str | Path,
    out_path: str | Path,
    encoder,
    dim_if_empty: int = 512,
) -> EmbedResult:
    """Encode every readable image under image_dir into an EMB1 store.

    Record ids are posix relative paths, so the store is stable across
    machines. Files that fail to decode are skipped and reported, not fatal.
    With no readable images the store is written empty, declaring
    dim_if_empty as its dimension.
    """
    image_dir = Path(image_dir)
    paths = find_images(image_dir)
    ids: list[str] = []
    images = []
    skipped: list[str] = []
    for p in paths:
        rel = p.relative_to(image_dir).as_posix()
        try:
            with Image.open(p) as im:
                images.append(im.convert("RGB"))
        except (UnidentifiedImageError, OSError) as exc:
            log.warning("skipping %s: %s", rel, exc)
            skipped.append(rel)
            continue
        ids.append(rel)

    if not images:
        write_store(out_path, dim_if_empty, [])
        return EmbedResult(ids=[], dim=dim_if_empty, skipped=skipped)

    vectors = np.asarray(encoder(images), dtype=np.float32)
    if vectors.ndim != 2 or vectors.shape[0] != len(ids):
        raise ValueError(
            f"encoder returned shape {vectors.shape} for {len(ids)} images"
        )
    dim = int(vectors.shape[1])
    write_store(out_path, dim, list(zip(ids, vectors)))
    return EmbedResult(ids=ids, dim=dim, skipped=skipped)


def embed_prompt(
    prompt: str,
    out_path: str | Path,
    encoder,
    template: str | None = None,
) -> EmbedResult:
    """Encode one text prompt into a single-record EMB1 store.

    The record id is the prompt itself. An optional template with a {}
    placeholder wraps the prompt before encoding; the id stays the raw prompt.
    """
    if not prompt.strip():
        raise ValueError("prompt must not be empty")
    if "," in prompt or "\n" in prompt:
        raise ValueError("prompt may not contain commas or newlines")
    text = template.format(prompt) if template else prompt
    vectors = np.asarray(encoder([text]), dtype=np.float32)
    if vectors.ndim != 2 or vectors.shape[0] != 1:
        raise ValueError(f"encoder returned shape {vectors.shape} for one prompt")
    dim = int(vectors.shape[1])
    write_store(out_path, dim, [(prompt, vectors[0])])
    return EmbedResult(ids=[prompt], dim=dim)
