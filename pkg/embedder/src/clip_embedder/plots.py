"""Render figures from the threshold tool's text exports.

All inputs are the headered CSV files the companion CLI writes:
center,density / center,density,fit_dual,fit_single / threshold,fpr,tpr
plus the id,distance and id,label tables.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class MissingColumn(ValueError):
    """A required column is absent from an export file."""


def read_columns(path: str | Path, required: list[str]) -> dict[str, list[str]]:
    """Read a headered CSV, failing with the missing column's name."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for col in required:
            if col not in fields:
                raise MissingColumn(f"{path}: missing column {col!r}")
        rows = list(reader)
    return {col: [row[col] for row in rows] for col in fields}


def _floats(values: list[str]) -> np.ndarray:
    return np.asarray([float(v) for v in values], dtype=np.float64)


def _mark_tau(ax, tau: float | None, tau_opt: float | None) -> None:
    if tau is not None:
        ax.axvline(tau, color="tab:red", linestyle="--", label=f"tau = {tau:.4f}")
    if tau_opt is not None:
        ax.axvline(
            tau_opt, color="tab:purple", linestyle=":", label=f"optimal tau = {tau_opt:.4f}"
        )


def histogram_fits_overlay(
    fits_csv: str | Path,
    out_path: str | Path,
    tau: float | None = None,
    tau_opt: float | None = None,
) -> None:
    """Density histogram with both fitted curves and threshold markers."""
    cols = read_columns(fits_csv, ["center", "density", "fit_dual", "fit_single"])
    centers = _floats(cols["center"])
    width = float(centers[1] - centers[0]) if len(centers) > 1 else 0.01
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(centers, _floats(cols["density"]), width=width, color="0.8", label="density")
    ax.plot(centers, _floats(cols["fit_dual"]), color="tab:blue", label="dual fit")
    ax.plot(centers, _floats(cols["fit_single"]), color="tab:orange", label="single fit")
    _mark_tau(ax, tau, tau_opt)
    ax.set_xlabel("cosine distance")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def _sorted_distances(
    distances_csv: str | Path,
    labels_csv: str | Path | None,
    positive: str | None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Ascending distances plus, when labels are given, a positive mask."""
    cols = read_columns(distances_csv, ["id", "distance"])
    ids = cols["id"]
    d = _floats(cols["distance"])
    order = np.lexsort((ids, d))
    d = d[order]
    if labels_csv is None:
        return d, None
    if positive is None:
        raise ValueError("a positive label is required with a label file")
    lab = read_columns(labels_csv, ["id", "label"])
    mapping = dict(zip(lab["id"], lab["label"]))
    mask = np.asarray([mapping.get(ids[i]) == positive for i in order])
    return d, mask


def sorted_distance_curve(
    distances_csv: str | Path,
    out_path: str | Path,
    labels_csv: str | Path | None = None,
    positive: str | None = None,
    tau: float | None = None,
) -> None:
    """Distances in ascending order, colored by ground truth when known."""
    d, mask = _sorted_distances(distances_csv, labels_csv, positive)
    rank = np.arange(len(d))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if mask is None:
        ax.scatter(rank, d, s=4, color="tab:blue")
    else:
        ax.scatter(rank[mask], d[mask], s=4, color="tab:green", label="positive")
        ax.scatter(rank[~mask], d[~mask], s=4, color="tab:red", label="negative")
        ax.legend()
    if tau is not None:
        ax.axhline(tau, color="tab:red", linestyle="--")
    ax.set_xlabel("rank")
    ax.set_ylabel("cosine distance")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def barcode_strip(
    distances_csv: str | Path,
    labels_csv: str | Path,
    positive: str,
    out_path: str | Path,
    tau: float | None = None,
) -> None:
    """One colored stripe per image in distance order, green for positives."""
    d, mask = _sorted_distances(distances_csv, labels_csv, positive)
    colors = np.where(mask[None, :, None], [[[0.0, 0.6, 0.0]]], [[[0.85, 0.1, 0.1]]])
    fig, ax = plt.subplots(figsize=(8, 1.6))
    ax.imshow(colors, aspect="auto", interpolation="nearest")
    if tau is not None:
        cut = int(np.searchsorted(d, tau, side="right"))
        ax.axvline(cut - 0.5, color="black", linewidth=1.5)
    ax.set_yticks([])
    ax.set_xlabel("images ordered by distance")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)


def roc_plot(roc_csv: str | Path, out_path: str | Path) -> None:
    """ROC curve with the point farthest from (fpr, tpr) = (1, 0) marked."""
    cols = read_columns(roc_csv, ["threshold", "fpr", "tpr"])
    fpr = _floats(cols["fpr"])
    tpr = _floats(cols["tpr"])
    best = int(np.argmax([math.hypot(f - 1.0, t) for f, t in zip(fpr, tpr)]))
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(fpr, tpr, color="tab:blue")
    ax.plot([0, 1], [0, 1], color="0.7", linestyle=":")
    ax.scatter([fpr[best]], [tpr[best]], color="tab:red", zorder=3,
               label=f"optimum (threshold {float(cols['threshold'][best]):.4f})")
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
