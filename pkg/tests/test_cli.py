import io
import json

import numpy as np
import pytest

from threshgate.cli import main
from threshgate.store import (
    DistanceTable,
    EmbeddingRecord,
    EmbeddingStore,
    read_distance_table,
    write_distance_table,
    write_embedding_store,
)


def write_store(path, dim, records):
    store = EmbeddingStore(dim=dim, records=records)
    with open(path, "wb") as fh:
        write_embedding_store(store, fh)


def write_table(path, pairs):
    with open(path, "w") as fh:
        write_distance_table(DistanceTable(list(pairs)), fh)


@pytest.fixture
def bimodal_table(tmp_path, bimodal_distances):
    path = tmp_path / "distances.csv"
    write_table(path, ((f"id{i}", float(d)) for i, d in enumerate(bimodal_distances)))
    return path


class TestDistancesCommand:
    def test_two_image_store(self, tmp_path):
        emb = tmp_path / "images.emb"
        qry = tmp_path / "query.emb"
        out = tmp_path / "out.csv"
        write_store(emb, 2, [EmbeddingRecord("a", [1, 0]), EmbeddingRecord("b", [0, 1])])
        write_store(qry, 2, [EmbeddingRecord("q", [1, 0])])
        code = main(["distances", "--embeddings", str(emb), "--query", str(qry), "--out", str(out)])
        assert code == 0
        with open(out) as fh:
            table = read_distance_table(fh)
        assert table.ids == ["a", "b"]
        assert table.distances[0] == pytest.approx(0.0, abs=1e-12)
        assert table.distances[1] == pytest.approx(1.0, abs=1e-12)

    def test_dim_mismatch_names_both(self, tmp_path, capsys):
        emb = tmp_path / "images.emb"
        qry = tmp_path / "query.emb"
        write_store(emb, 3, [EmbeddingRecord("a", [1, 0, 0])])
        write_store(qry, 2, [EmbeddingRecord("q", [1, 0])])
        code = main(
            ["distances", "--embeddings", str(emb), "--query", str(qry), "--out", str(tmp_path / "o")]
        )
        assert code == 1
        err = capsys.readouterr().err
        assert "3" in err and "2" in err

    def test_query_store_with_two_records(self, tmp_path):
        emb = tmp_path / "images.emb"
        qry = tmp_path / "query.emb"
        write_store(emb, 2, [EmbeddingRecord("a", [1, 0])])
        write_store(qry, 2, [EmbeddingRecord("q", [1, 0]), EmbeddingRecord("r", [0, 1])])
        code = main(
            ["distances", "--embeddings", str(emb), "--query", str(qry), "--out", str(tmp_path / "o")]
        )
        assert code == 1

    def test_missing_file(self, tmp_path):
        code = main(
            [
                "distances",
                "--embeddings",
                str(tmp_path / "nope.emb"),
                "--query",
                str(tmp_path / "nope2.emb"),
                "--out",
                str(tmp_path / "o"),
            ]
        )
        assert code == 1


class TestThresholdCommand:
    def test_bimodal(self, tmp_path, bimodal_table):
        report = tmp_path / "report.json"
        out = tmp_path / "selected.txt"
        code = main(
            ["threshold", "--distances", str(bimodal_table), "--report", str(report), "--out", str(out)]
        )
        assert code == 0
        data = json.loads(report.read_text())
        assert data["model"] == "dual"
        assert data["exit_status"] == 0
        assert data["n_selected"] > 0
        selected = out.read_text().splitlines()
        assert len(selected) == data["n_selected"]

    def test_constant_distances_manual(self, tmp_path):
        path = tmp_path / "const.csv"
        write_table(path, ((f"id{i}", 0.7) for i in range(50)))
        report = tmp_path / "report.json"
        code = main(["threshold", "--distances", str(path), "--report", str(report)])
        assert code == 2
        data = json.loads(report.read_text())
        assert data["model"] == "manual"
        assert data["tau"] is None

    def test_report_to_stdout(self, bimodal_table, capsys):
        code = main(["threshold", "--distances", str(bimodal_table)])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["model"] == "dual"


class TestEvaluateCommand:
    @pytest.fixture
    def labeled(self, tmp_path):
        dist = tmp_path / "d.csv"
        lab = tmp_path / "l.csv"
        write_table(dist, [("a", 0.1), ("b", 0.2), ("c", 0.9)])
        lab.write_text("id,label\na,snow\nb,fog\nc,snow\n")
        return dist, lab

    def test_fixed_threshold_metrics(self, labeled, capsys):
        dist, lab = labeled
        code = main(
            ["evaluate", "--distances", str(dist), "--labels", str(lab), "--positive", "snow", "--threshold", "0.5"]
        )
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        m = data["threshold_metrics"]
        # tp=1 fp=1 fn=1 tn=0 by hand
        assert m["f1"] == pytest.approx(0.5)
        assert m["precision"] == pytest.approx(0.5)
        assert data["optimal_f1"]["f1"] > 0

    def test_threshold_and_auto_conflict(self, labeled):
        dist, lab = labeled
        code = main(
            [
                "evaluate",
                "--distances",
                str(dist),
                "--labels",
                str(lab),
                "--positive",
                "snow",
                "--threshold",
                "0.5",
                "--auto",
            ]
        )
        assert code == 1

    def test_unknown_positive(self, labeled):
        dist, lab = labeled
        code = main(
            ["evaluate", "--distances", str(dist), "--labels", str(lab), "--positive", "rain"]
        )
        assert code == 1

    def test_auto_on_bimodal(self, tmp_path, bimodal_table, bimodal_distances):
        lab = tmp_path / "labels.csv"
        rows = ["id,label"]
        rows += [
            f"id{i},{'match' if i < 900 else 'other'}" for i in range(len(bimodal_distances))
        ]
        lab.write_text("\n".join(rows) + "\n")
        code = main(
            ["evaluate", "--distances", str(bimodal_table), "--labels", str(lab), "--positive", "match", "--auto"]
        )
        assert code == 0


class TestExportCommand:
    def test_stats(self, tmp_path, capsys):
        path = tmp_path / "d.csv"
        write_table(path, [("a", 0.1), ("b", 0.3)])
        code = main(["export", "--distances", str(path), "--stats"])
        assert code == 0
        out = capsys.readouterr().out
        assert "min 0.1" in out
        assert "max 0.3" in out
        assert "mean 0.2" in out

    def test_histogram_rows(self, tmp_path, bimodal_table):
        out = tmp_path / "hist.csv"
        code = main(["export", "--distances", str(bimodal_table), "--histogram", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "center,density"
        assert len(lines) == 101

    def test_fits_rows(self, tmp_path, bimodal_table):
        out = tmp_path / "fits.csv"
        code = main(["export", "--distances", str(bimodal_table), "--fits", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "center,density,fit_dual,fit_single"
        assert len(lines) == 101

    def test_roc_perfect_separation(self, tmp_path):
        dist = tmp_path / "d.csv"
        lab = tmp_path / "l.csv"
        write_table(dist, [("a", 0.1), ("b", 0.2), ("c", 0.8), ("d", 0.9)])
        lab.write_text("id,label\na,pos\nb,pos\nc,neg\nd,neg\n")
        out = tmp_path / "roc.csv"
        code = main(
            ["export", "--distances", str(dist), "--roc", str(out), "--labels", str(lab), "--positive", "pos"]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "threshold,fpr,tpr"
        assert any(line.endswith(",0,1") for line in lines[1:])

    def test_roc_requires_labels(self, tmp_path, bimodal_table):
        code = main(["export", "--distances", str(bimodal_table), "--roc", str(tmp_path / "r")])
        assert code == 1


class TestDeterminism:
    def test_reports_byte_identical(self, tmp_path, bimodal_table, monkeypatch):
        monkeypatch.setenv("THRESHGATE_FIXED_TIMESTAMP", "2026-01-01T00:00:00Z")
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        s1, s2 = tmp_path / "s1.txt", tmp_path / "s2.txt"
        for report, sel in ((r1, s1), (r2, s2)):
            code = main(
                ["threshold", "--distances", str(bimodal_table), "--report", str(report), "--out", str(sel)]
            )
            assert code == 0
        assert r1.read_bytes() == r2.read_bytes()
        assert s1.read_bytes() == s2.read_bytes()
        assert b"2026-01-01T00:00:00Z" in r1.read_bytes()
