"""CLIP encoders for images and text prompts.

Model weights are loaded lazily so that everything except actual encoding
works without torch or transformers installed.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

DEFAULT_MODEL = "openai/clip-vit-base-patch32"

# An image encoder maps a list of PIL images to an (n, dim) float32 array.
# A text encoder maps a list of strings to an (n, dim) float32 array.
ImageEncoder = Callable[[Sequence], np.ndarray]
TextEncoder = Callable[[Sequence[str]], np.ndarray]


class ModelUnavailable(RuntimeError):
    """torch or transformers is not installed."""


def _load(model_name: str):
    try:
        import torch  # noqa: F401
        from transformers import CLIPModel, CLIPProcessor
    except ImportError as exc:
        raise ModelUnavailable(
            "CLIP encoding requires torch and transformers; "
            "install the 'model' extra"
        ) from exc
    model = CLIPModel.from_pretrained(model_name)
    model.eval()
    processor = CLIPProcessor.from_pretrained(model_name)
    return model, processor


def clip_image_encoder(model_name: str = DEFAULT_MODEL, batch_size: int = 16) -> ImageEncoder:
    """Return an encoder producing CLIP image features."""
    import functools

    @functools.lru_cache(maxsize=1)
    def loaded():
        return _load(model_name)

    def encode(images: Sequence) -> np.ndarray:
        import torch

        model, processor = loaded()
        chunks = []
        with torch.no_grad():
            for i in range(0, len(images), batch_size):
                batch = processor(images=list(images[i : i + batch_size]), return_tensors="pt")
                feats = model.get_image_features(**batch)
                chunks.append(feats.cpu().numpy().astype(np.float32))
        return np.concatenate(chunks) if chunks else np.empty((0, 0), dtype=np.float32)

    return encode


def clip_text_encoder(model_name: str = DEFAULT_MODEL) -> TextEncoder:
    """Return an encoder producing CLIP text features."""
    import functools

    @functools.lru_cache(maxsize=1)
    def loaded():
        return _load(model_name)

    def encode(prompts: Sequence[str]) -> np.ndarray:
        import torch

        model, processor = loaded()
        with torch.no_grad():
            batch = processor(text=list(prompts), return_tensors="pt", padding=True)
            feats = model.get_text_features(**batch)
        return feats.cpu().numpy().astype(np.float32)

    return encode
