"""Least-squares fits of one- and two-component Gaussian curves to a histogram.

Both fits run a Levenberg-Marquardt loop with analytic Jacobians and report
the diagnostics the model selection step compares: the summed covariance
diagonal (parameter uncertainty) and the summed absolute bin error.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .histogram import Histogram

MAX_ITERATIONS = 1000
RSS_TOL = 1e-10
STEP_TOL = 1e-10
INITIAL_DAMPING = 1e-3
MIN_GAIN_RATIO = 0.1
COND_LIMIT = 1e12


@dataclass(frozen=True)
class GaussianParams:
    a: float
    mu: float
    sigma: float


@dataclass(frozen=True)
class DualGaussianParams:
    g1: GaussianParams
    g2: GaussianParams


@dataclass(frozen=True)
class FitReport:
    params: GaussianParams | DualGaussianParams
    converged: bool
    valid: bool
    delta: float
    epsilon: float
    iterations: int
    rss: float


def eval_gaussian(p: GaussianParams, x) -> np.ndarray | float:
    """a * exp(-((x - mu) / sigma)^2 / 2); degenerate sigma collapses to a spike."""
    x = np.asarray(x, dtype=np.float64)
    if p.sigma == 0.0:
        out = np.where(x == p.mu, float(p.a), 0.0)
    else:
        z = (x - p.mu) / p.sigma
        out = p.a * np.exp(-0.5 * z * z)
    return float(out) if out.ndim == 0 else out


def eval_dual(p: DualGaussianParams, x) -> np.ndarray | float:
    return eval_gaussian(p.g1, x) + eval_gaussian(p.g2, x)


def sum_abs_error(model: Callable[[np.ndarray], np.ndarray], h: Histogram) -> float:
    return float(np.sum(np.abs(np.asarray(model(h.centers)) - h.densities)))


def _component_columns(a: float, mu: float, sigma: float, x: np.ndarray) -> tuple[np.ndarray, ...]:
    z = (x - mu) / sigma
    e = np.exp(-0.5 * z * z)
    return e, a * e * z / sigma, a * e * z * z / sigma


def single_model_jacobian(params: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Model values and Jacobian columns (d/da, d/dmu, d/dsigma)."""
    a, mu, sigma = params
    e, dmu, dsigma = _component_columns(a, mu, sigma, x)
    return a * e, np.column_stack([e, dmu, dsigma])


def dual_model_jacobian(params: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Model values and Jacobian for (a1, mu1, sigma1, a2, mu2, sigma2)."""
    a1, mu1, s1, a2, mu2, s2 = params
    e1, dmu1, ds1 = _component_columns(a1, mu1, s1, x)
    e2, dmu2, ds2 = _component_columns(a2, mu2, s2, x)
    return a1 * e1 + a2 * e2, np.column_stack([e1, dmu1, ds1, e2, dmu2, ds2])


def _levenberg_marquardt(
    model_jac: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]],
    p0: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    trace: list[float] | None = None,
) -> tuple[np.ndarray, bool, int, float, np.ndarray]:
    """Minimize sum((model(x) - y)^2); returns (params, converged, iters, rss, J).

    When given, `trace` collects the RSS after every accepted step.
    """
    p = np.asarray(p0, dtype=np.float64).copy()
    fx, jac = model_jac(p, x)
    r = fx - y
    rss = float(r @ r)
    if trace is not None:
        trace.append(rss)
    lam = INITIAL_DAMPING
    converged = False
    iterations = 0
    if not np.isfinite(rss):
        return p, False, 0, rss, jac
    while iterations < MAX_ITERATIONS:
        iterations += 1
        jtj = jac.T @ jac
        grad = jac.T @ r
        # Marquardt scaling: damp proportionally to each parameter's curvature,
        # floored so an all-but-flat direction cannot make the system singular
        diag = np.diag(jtj).copy()
        floor = 1e-12 * diag.max() if diag.max() > 0.0 else 1.0
        diag[diag < floor] = floor
        try:
            step = np.linalg.solve(jtj + lam * np.diag(diag), -grad)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        if float(np.max(np.abs(step))) < STEP_TOL:
            converged = True
            break
        p_new = p + step
        fx_new, jac_new = model_jac(p_new, x)
        r_new = fx_new - y
        rss_new = float(r_new @ r_new)
        if not np.isfinite(rss_new):
            break
        # gain ratio: actual vs locally predicted reduction; a step that
        # improves far less than the quadratic model promised has left the
        # trust region of the linearization and gets rejected
        predicted = -(2.0 * step @ grad + step @ (jtj @ step))
        gain = (rss - rss_new) / predicted if predicted > 0.0 else -1.0
        if rss_new < rss and gain > MIN_GAIN_RATIO:
            rel_change = (rss - rss_new) / max(rss, np.finfo(float).tiny)
            p, r, jac, rss = p_new, r_new, jac_new, rss_new
            if trace is not None:
                trace.append(rss)
            lam /= 10.0
            if rel_change < RSS_TOL or rss == 0.0:
                converged = True
                break
        else:
            lam *= 10.0
    return p, converged, iterations, rss, jac


def _covariance_trace(jac: np.ndarray, rss: float) -> float:
    """Sum of the covariance diagonal, cov = s^2 (J^T J)^-1, s^2 = rss/(M - P)."""
    m, n_params = jac.shape
    jtj = jac.T @ jac
    if m <= n_params or not np.all(np.isfinite(jtj)):
        return np.inf
    if np.linalg.cond(jtj) > COND_LIMIT:
        return np.inf
    s2 = rss / (m - n_params)
    cov = s2 * np.linalg.inv(jtj)
    return float(np.trace(cov))


def _component_ok(p: GaussianParams, h: Histogram) -> bool:
    return (
        p.a > 0.0
        and abs(p.sigma) >= h.bin_width / 10.0
        and h.edges[0] - h.bin_width <= p.mu <= h.edges[-1] + h.bin_width
    )


def fit_single(h: Histogram, sample_mean: float, sample_std: float) -> FitReport:
    """Fit one Gaussian; initialized at amplitude 1 and the sample moments."""
    if sample_std <= 0.0:
        raise ValueError("sample_std must be positive")
    p0 = np.array([1.0, sample_mean, sample_std])
    p, converged, iterations, rss, jac = _levenberg_marquardt(
        single_model_jacobian, p0, h.centers, h.densities
    )
    params = GaussianParams(a=float(p[0]), mu=float(p[1]), sigma=abs(float(p[2])))
    delta = _covariance_trace(jac, rss) if converged else np.inf
    epsilon = sum_abs_error(lambda x: eval_gaussian(params, x), h)
    valid = bool(converged and np.isfinite(delta) and _component_ok(params, h))
    return FitReport(params, converged, valid, delta, epsilon, iterations, rss)


def fit_dual(h: Histogram, sample_mean: float, sample_std: float) -> FitReport:
    """Fit a two-Gaussian sum.

    Amplitudes start at 1 and widths at the sample std; the means are offset
    half a std to each side of the sample mean, since identical starting means
    make the two components' Jacobian columns collinear and unseparable.
    """
    if sample_std <= 0.0:
        raise ValueError("sample_std must be positive")
    p0 = np.array(
        [
            1.0,
            sample_mean - 0.5 * sample_std,
            sample_std,
            1.0,
            sample_mean + 0.5 * sample_std,
            sample_std,
        ]
    )
    p, converged, iterations, rss, jac = _levenberg_marquardt(
        dual_model_jacobian, p0, h.centers, h.densities
    )
    g1 = GaussianParams(a=float(p[0]), mu=float(p[1]), sigma=abs(float(p[2])))
    g2 = GaussianParams(a=float(p[3]), mu=float(p[4]), sigma=abs(float(p[5])))
    if g2.mu < g1.mu:
        g1, g2 = g2, g1
    params = DualGaussianParams(g1=g1, g2=g2)
    delta = _covariance_trace(jac, rss) if converged else np.inf
    epsilon = sum_abs_error(lambda x: eval_dual(params, x), h)
    valid = bool(
        converged
        and np.isfinite(delta)
        and _component_ok(g1, h)
        and _component_ok(g2, h)
    )
    return FitReport(params, converged, valid, delta, epsilon, iterations, rss)
