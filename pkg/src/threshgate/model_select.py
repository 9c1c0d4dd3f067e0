"""Decision between the two-Gaussian model, the single-Gaussian fallback,
and giving up to manual analysis."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .gaussfit import FitReport


class ModelKind(enum.Enum):
    DUAL = "dual"
    SINGLE = "single"
    MANUAL = "manual"


@dataclass(frozen=True)
class ModelChoice:
    variant: ModelKind
    dual_report: FitReport | None = None
    single_report: FitReport | None = None


def select_model(dual: FitReport, single: FitReport, delta_factor: float = 2.0) -> ModelChoice:
    """Prefer the dual model unless its uncertainty or absolute error disqualify it.

    With both fits valid the dual model wins iff delta_dual < delta_factor *
    delta_single and epsilon_dual < epsilon_single (strict, matching the
    decision procedure); otherwise the only valid fit wins, and with neither
    valid the outcome is manual analysis.
    """
    if dual.valid and single.valid:
        if dual.delta < delta_factor * single.delta and dual.epsilon < single.epsilon:
            variant = ModelKind.DUAL
        else:
            variant = ModelKind.SINGLE
    elif dual.valid:
        variant = ModelKind.DUAL
    elif single.valid:
        variant = ModelKind.SINGLE
    else:
        variant = ModelKind.MANUAL
    return ModelChoice(variant=variant, dual_report=dual, single_report=single)
