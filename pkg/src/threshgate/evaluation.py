"""Ground-truth evaluation: confusion metrics, optimal-F1 scan, ROC analysis."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .store import DistanceTable


class UnknownPositiveClass(ValueError):
    pass


class NoPositives(ValueError):
    pass


class NoNegatives(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int
    unlabeled: int = 0  # ids without ground truth, excluded from the counts

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsReport:
    threshold: float
    n_results: int
    f1: float
    precision: float
    recall: float
    accuracy: float
    specificity: float
    zero_division: bool  # true when any metric denominator was 0 (reported as 0)


@dataclass(frozen=True)
class RocCurve:
    points: list[tuple[float, float, float]]  # (fpr, tpr, threshold)
    optimum: tuple[float, float, float]


def _labeled_entries(
    table: DistanceTable, labels: dict[str, str], positive: str
) -> tuple[list[tuple[float, str, bool]], int]:
    if positive not in labels.values():
        raise UnknownPositiveClass(f"label {positive!r} absent from the label table")
    rows = []
    unlabeled = 0
    for id_, d in table.entries:
        label = labels.get(id_)
        if label is None:
            unlabeled += 1
            continue
        rows.append((d, id_, label == positive))
    return rows, unlabeled


def confusion(
    table: DistanceTable, labels: dict[str, str], positive: str, tau: float
) -> ConfusionCounts:
    """Counts of the four outcomes of the cut d <= tau against ground truth."""
    rows, unlabeled = _labeled_entries(table, labels, positive)
    tp = fp = tn = fn = 0
    for d, _, is_pos in rows:
        if d <= tau:
            if is_pos:
                tp += 1
            else:
                fp += 1
        elif is_pos:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn, unlabeled=unlabeled)


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def metrics(c: ConfusionCounts, tau: float) -> MetricsReport:
    """Standard classification metrics; zero denominators are reported as 0."""
    if c.total <= 0:
        raise ValueError("no evaluated ids")
    f1, z1 = _ratio(2 * c.tp, 2 * c.tp + c.fn + c.fp)
    precision, z2 = _ratio(c.tp, c.tp + c.fp)
    recall, z3 = _ratio(c.tp, c.tp + c.fn)
    accuracy, z4 = _ratio(c.tp + c.tn, c.total)
    specificity, z5 = _ratio(c.tn, c.tn + c.fp)
    return MetricsReport(
        threshold=tau,
        n_results=c.tp + c.fp,
        f1=f1,
        precision=precision,
        recall=recall,
        accuracy=accuracy,
        specificity=specificity,
        zero_division=z1 or z2 or z3 or z4 or z5,
    )


def _f1(tp: int, fp: int, fn: int) -> float:
    den = 2 * tp + fn + fp
    return 2 * tp / den if den else 0.0


def optimal_f1_threshold(
    table: DistanceTable, labels: dict[str, str], positive: str
) -> tuple[float, MetricsReport]:
    """Best-F1 cut over every observed distance (plus a below-minimum candidate).

    Single ascending sweep; ties in F1 resolve to the smaller threshold.
    """
    rows, unlabeled = _labeled_entries(table, labels, positive)
    n_pos = sum(1 for _, _, is_pos in rows if is_pos)
    if n_pos == 0:
        raise NoPositives(f"no id labeled {positive!r} in the table")
    rows.sort(key=lambda r: (r[0], r[1]))
    best_tau = -math.inf
    best_f1 = _f1(0, 0, n_pos)
    tp = fp = 0
    i = 0
    n = len(rows)
    while i < n:
        d = rows[i][0]
        while i < n and rows[i][0] == d:
            if rows[i][2]:
                tp += 1
            else:
                fp += 1
            i += 1
        f1 = _f1(tp, fp, n_pos - tp)
        if f1 > best_f1:
            best_f1, best_tau = f1, d
    counts = confusion(table, labels, positive, best_tau)
    return best_tau, metrics(counts, best_tau)


def roc_curve(table: DistanceTable, labels: dict[str, str], positive: str) -> RocCurve:
    """One (fpr, tpr) point per threshold candidate, plus the (0, 0) anchor.

    The optimum is the point with maximal Euclidean distance from
    (fpr, tpr) = (1, 0), i.e. furthest from the all-false-positive corner;
    ties resolve to the smaller threshold.
    """
    rows, _ = _labeled_entries(table, labels, positive)
    n_pos = sum(1 for _, _, is_pos in rows if is_pos)
    n_neg = len(rows) - n_pos
    if n_pos == 0:
        raise NoPositives(f"no id labeled {positive!r} in the table")
    if n_neg == 0:
        raise NoNegatives(f"every id labeled {positive!r}")
    rows.sort(key=lambda r: (r[0], r[1]))
    points: list[tuple[float, float, float]] = [(0.0, 0.0, -math.inf)]
    tp = fp = 0
    i = 0
    n = len(rows)
    while i < n:
        d = rows[i][0]
        while i < n and rows[i][0] == d:
            if rows[i][2]:
                tp += 1
            else:
                fp += 1
            i += 1
        points.append((fp / n_neg, tp / n_pos, d))
    optimum = points[0]
    best = math.hypot(optimum[0] - 1.0, optimum[1])
    for pt in points[1:]:
        dist = math.hypot(pt[0] - 1.0, pt[1])
        if dist > best:
            best, optimum = dist, pt
    return RocCurve(points=points, optimum=optimum)
