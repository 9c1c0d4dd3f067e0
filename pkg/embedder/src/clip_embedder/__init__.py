"""CLIP embedding extraction and plotting for the threshold pipeline."""

__version__ = "0.1.0"

from .embed import EmbedResult, embed_images, embed_prompt
from .storefmt import write_store

__all__ = ["EmbedResult", "embed_images", "embed_prompt", "write_store"]
