"""CLI tests, including the full cross-tool pipeline with fake encoders."""
import numpy as np
import pytest

import clip_embedder.cli as cli
from conftest import fake_image_encoder, fake_text_encoder

from threshgate.cli import main as threshgate_main


@pytest.fixture(autouse=True)
def patch_encoders(monkeypatch):
    monkeypatch.setattr(cli, "clip_image_encoder", lambda *a, **k: fake_image_encoder)
    monkeypatch.setattr(cli, "clip_text_encoder", lambda *a, **k: fake_text_encoder)


def test_embed_images_cli(image_dir, tmp_path, capsys):
    out = tmp_path / "img.emb"
    assert cli.main(["embed-images", "--images", str(image_dir), "--out", str(out)]) == 0
    assert "embedded 3 images" in capsys.readouterr().out
    assert out.exists()


def test_embed_images_reports_skips(image_dir, tmp_path, capsys):
    (image_dir / "bad.png").write_bytes(b"nope")
    out = tmp_path / "img.emb"
    assert cli.main(["embed-images", "--images", str(image_dir), "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert "skipped 1" in err and "bad.png" in err


def test_embed_images_missing_dir(tmp_path, capsys):
    rc = cli.main(
        ["embed-images", "--images", str(tmp_path / "nope"), "--out", str(tmp_path / "o.emb")]
    )
    assert rc == 1
    assert "error" in capsys.readouterr().err


def test_embed_prompt_cli(tmp_path):
    out = tmp_path / "q.emb"
    assert cli.main(["embed-prompt", "--prompt", "snow", "--out", str(out)]) == 0
    assert out.exists()


def test_embed_prompt_empty_rejected(tmp_path, capsys):
    assert cli.main(["embed-prompt", "--prompt", "", "--out", str(tmp_path / "q.emb")]) == 1
    assert "error" in capsys.readouterr().err


def test_plot_requires_a_target(tmp_path, capsys):
    assert cli.main(["plot"]) == 1
    assert "no plot requested" in capsys.readouterr().err


def test_full_pipeline_across_tools(image_dir, tmp_path, capsys):
    """Fake-embed images and a prompt, then drive the threshold tool's CLI
    on the emitted stores and plot its exports."""
    img_store = tmp_path / "img.emb"
    query_store = tmp_path / "q.emb"
    assert cli.main(["embed-images", "--images", str(image_dir), "--out", str(img_store)]) == 0
    assert cli.main(["embed-prompt", "--prompt", "red things", "--out", str(query_store)]) == 0

    dist = tmp_path / "d.csv"
    assert threshgate_main(
        ["distances", "--embeddings", str(img_store), "--query", str(query_store),
         "--out", str(dist)]
    ) == 0
    hist = tmp_path / "hist.csv"
    fits = tmp_path / "fits.csv"
    assert threshgate_main(
        ["export", "--distances", str(dist), "--bins", "3",
         "--histogram", str(hist), "--fits", str(fits)]
    ) == 0

    overlay = tmp_path / "overlay.png"
    curve = tmp_path / "curve.png"
    assert cli.main(
        ["plot", "--fits", str(fits), "--overlay", str(overlay),
         "--distances", str(dist), "--curve", str(curve), "--tau", "0.5"]
    ) == 0
    assert overlay.stat().st_size > 0
    assert curve.stat().st_size > 0
