"""Threshold extraction from a chosen model and subset materialization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussfit import DualGaussianParams, GaussianParams, fit_dual, fit_single
from .histogram import DegenerateRange, build_histogram
from .model_select import ModelChoice, ModelKind, select_model
from .store import DistanceTable


class NoIntersection(ValueError):
    """One component dominates the whole inter-mean interval."""


@dataclass(frozen=True)
class ThresholdDecision:
    tau: float | None
    model: ModelChoice
    selected_ids: list[str]

    @property
    def n_selected(self) -> int:
        return len(self.selected_ids)


def intersection_threshold(p: DualGaussianParams) -> float:
    """Crossing point of the two fitted components between their means.

    Found by bisection on the component difference over [mu1, mu2], refined
    until the bracket cannot shrink further; at the crossing neither
    component's density exceeds the other, so false positives and false
    negatives are weighted equally.
    """
    g1, g2 = p.g1, p.g2
    if not g1.mu < g2.mu:
        raise ValueError("expected g1.mu < g2.mu")
    if g1.a <= 0.0 or g2.a <= 0.0 or g1.sigma == 0.0 or g2.sigma == 0.0:
        raise ValueError("components must have positive amplitude and nonzero sigma")

    # work on log densities: the raw difference underflows to a flat zero
    # plateau between well-separated narrow components
    la1, la2 = np.log(g1.a), np.log(g2.a)

    def diff(x: float) -> float:
        z1 = (x - g1.mu) / g1.sigma
        z2 = (x - g2.mu) / g2.sigma
        return (la1 - 0.5 * z1 * z1) - (la2 - 0.5 * z2 * z2)

    lo, hi = g1.mu, g2.mu
    flo, fhi = diff(lo), diff(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoIntersection(
            "component difference does not change sign between the means"
        )
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = diff(mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def fallback_threshold(p: GaussianParams, k_std: float = 2.0) -> float:
    """Outlier cut mu - k_std * sigma on the single fitted Gaussian."""
    return p.mu - k_std * p.sigma


def select_images(table: DistanceTable, tau: float) -> list[str]:
    """Ids with distance <= tau, ordered by (distance, id)."""
    hits = [(d, id_) for id_, d in table.entries if d <= tau]
    return [id_ for _, id_ in sorted(hits)]


def decide_threshold(
    distances: np.ndarray,
    bins: int = 100,
    delta_factor: float = 2.0,
    k_std: float = 2.0,
) -> tuple[float | None, ModelChoice]:
    """Histogram, both fits, model choice and the resulting cut, on raw values."""
    d = np.asarray(distances, dtype=np.float64)
    try:
        hist = build_histogram(d, bins=bins)
    except DegenerateRange:
        return None, ModelChoice(variant=ModelKind.MANUAL)
    mean = float(d.mean())
    std = float(d.std())  # population std of the raw distances
    dual = fit_dual(hist, mean, std)
    single = fit_single(hist, mean, std)
    choice = select_model(dual, single, delta_factor=delta_factor)
    if choice.variant is ModelKind.DUAL:
        try:
            return intersection_threshold(dual.params), choice
        except NoIntersection:
            # keep the pipeline automatic: fall back to the single-Gaussian rule
            if single.valid:
                choice = ModelChoice(ModelKind.SINGLE, dual, single)
            else:
                return None, ModelChoice(ModelKind.MANUAL, dual, single)
    if choice.variant is ModelKind.SINGLE:
        return fallback_threshold(single.params, k_std=k_std), choice
    return None, choice


def auto_threshold(
    table: DistanceTable,
    bins: int = 100,
    delta_factor: float = 2.0,
    k_std: float = 2.0,
) -> ThresholdDecision:
    """End-to-end automatic threshold and subset for one distance table."""
    tau, choice = decide_threshold(
        table.distances, bins=bins, delta_factor=delta_factor, k_std=k_std
    )
    selected = select_images(table, tau) if tau is not None else []
    return ThresholdDecision(tau=tau, model=choice, selected_ids=selected)
