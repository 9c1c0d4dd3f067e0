import math

import numpy as np
import pytest

from threshgate.gaussfit import DualGaussianParams


def closed_form_intersection(p: DualGaussianParams) -> float | None:
    """Root of the log-space quadratic between the two means, or None.

    ln a1 - ((t - mu1)/s1)^2 / 2 = ln a2 - ((t - mu2)/s2)^2 / 2 is quadratic
    in t (linear when s1 == s2).  Independent of the bisection code path.
    """
    g1, g2 = p.g1, p.g2
    qa = 0.5 / g2.sigma**2 - 0.5 / g1.sigma**2
    qb = g1.mu / g1.sigma**2 - g2.mu / g2.sigma**2
    qc = (
        0.5 * (g2.mu / g2.sigma) ** 2
        - 0.5 * (g1.mu / g1.sigma) ** 2
        + math.log(g1.a / g2.a)
    )
    if qa == 0.0:
        roots = [] if qb == 0.0 else [-qc / qb]
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            roots = []
        else:
            sq = math.sqrt(disc)
            roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
    inside = [t for t in roots if g1.mu <= t <= g2.mu]
    return min(inside) if inside else None


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


@pytest.fixture
def bimodal_distances():
    """900 + 7100 samples from two well-separated normals, clipped to [0, 2]."""
    gen = np.random.default_rng(42)
    d = np.concatenate(
        [gen.normal(0.70, 0.015, 900), gen.normal(0.78, 0.020, 7100)]
    )
    return np.clip(d, 0.0, 2.0)
