import hashlib

import numpy as np
import pytest
from PIL import Image


def fake_image_encoder(images):
    """Deterministic stand-in: hash each image's pixel bytes into 8 floats."""
    out = []
    for im in images:
        digest = hashlib.sha256(im.tobytes()).digest()
        vec = np.frombuffer(digest[:32], dtype=np.uint8)[:8].astype(np.float32)
        out.append(vec / 255.0 + 0.01)
    return np.stack(out) if out else np.empty((0, 8), dtype=np.float32)


def fake_text_encoder(prompts):
    out = []
    for text in prompts:
        digest = hashlib.sha256(text.encode("utf-8")).digest()
        vec = np.frombuffer(digest[:8], dtype=np.uint8).astype(np.float32)
        out.append(vec / 255.0 + 0.01)
    return np.stack(out) if out else np.empty((0, 8), dtype=np.float32)


@pytest.fixture
def image_dir(tmp_path):
    """Three small solid-color images, one in a subdirectory."""
    root = tmp_path / "images"
    (root / "sub").mkdir(parents=True)
    Image.new("RGB", (8, 8), (200, 30, 30)).save(root / "red.png")
    Image.new("RGB", (8, 8), (30, 200, 30)).save(root / "green.jpg")
    Image.new("RGB", (8, 8), (30, 30, 200)).save(root / "sub" / "blue.png")
    return root
