"""Exact asymptotic Type I error of the classic tests under a sparse 2x2 family.

For the 2x2 cell-probability family

    [[p^2, p(1-p)], [p(1-p), (1-p)^2]],   p = lambda / sqrt(n),

the classic Pearson and G tests do not approach their nominal level as
n grows.  The cell counts concentrate in one cell and the statistic's
limiting law is driven by Z ~ Poisson(lambda^2):

    Pearson:  (Z - lambda^2)^2 / lambda^2
    G:        2 Z log(Z / lambda^2) - 2 (Z - lambda^2),  with 0 log 0 = 0.

The asymptotic size at nominal level alpha is the probability that the
limit variable exceeds the chi-squared(1) critical value c_alpha.  Both
curves oscillate in lambda instead of settling at alpha, with jump
discontinuities where the z = 0 atom enters or leaves the rejection region
(lambda = sqrt(c_alpha / 2) for G, lambda = sqrt(c_alpha) for Pearson).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .numerics import chi2_quantile, poisson_tail_mass

__all__ = [
    "SizeCurvePoint",
    "pearson_asymptotic_size",
    "g_asymptotic_size",
    "size_curve",
    "DEFAULT_LAMBDA_GRID",
]

# resolves the visible oscillation of the size curves
DEFAULT_LAMBDA_GRID = np.linspace(0.05, 5.0, 500)

_SIZE_TESTS = ("pearson", "g")


@dataclass(frozen=True)
class SizeCurvePoint:
    """Asymptotic size of one classic test at one lambda."""

    lam: float
    alpha: float
    asymptotic_size: float
    test: str

    def __post_init__(self) -> None:
        if not (0.0 <= self.asymptotic_size <= 1.0):
            raise DomainError(f"size must lie in [0, 1], got {self.asymptotic_size}")


def _validate(lam: float, alpha: float) -> None:
    if not (lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def pearson_asymptotic_size(lam: float, alpha: float) -> float:
    """Limiting rejection probability of classic Pearson at level alpha.

    Returns P((Z - lambda^2)^2 / lambda^2 > c_alpha) for Z ~ Poisson(lambda^2),
    where c_alpha is the (1-alpha) chi-squared(1) quantile, by exact point-mass
    summation (truncated once cumulative probability reaches 1 - 1e-12).
    Rejection uses strict inequality, matching the classic rule statistic > c.
    """
    _validate(lam, alpha)
    c = chi2_quantile(1.0 - alpha, 1)
    mu = lam * lam
    return poisson_tail_mass(lambda z: (z - mu) ** 2 / mu > c, mu)


def g_asymptotic_size(lam: float, alpha: float) -> float:
    """Limiting rejection probability of the classic G test at level alpha.

    Returns P(2 Z log(Z / lambda^2) - 2 (Z - lambda^2) > c_alpha) for
    Z ~ Poisson(lambda^2) with the 0 log 0 = 0 convention (the statistic is
    2 lambda^2 at z = 0), by exact point-mass summation.
    """
    _validate(lam, alpha)
    c = chi2_quantile(1.0 - alpha, 1)
    mu = lam * lam

    def g_limit(z: int) -> float:
        if z == 0:
            return 2.0 * mu
        return 2.0 * z * math.log(z / mu) - 2.0 * (z - mu)

    return poisson_tail_mass(lambda z: g_limit(z) > c, mu)


def size_curve(
    test: str, alpha: float, lambda_grid: Iterable[float] | None = None
) -> list[SizeCurvePoint]:
    """Evaluate one test's asymptotic size over a grid of lambda values.

    Output order follows the grid.  Defaults to DEFAULT_LAMBDA_GRID.
    """
    if test not in _SIZE_TESTS:
        raise DomainError(f"unknown test {test!r}; expected one of {_SIZE_TESTS}")
    grid: Sequence[float] = (
        DEFAULT_LAMBDA_GRID if lambda_grid is None else [float(x) for x in lambda_grid]
    )
    size_fn = pearson_asymptotic_size if test == "pearson" else g_asymptotic_size
    return [
        SizeCurvePoint(lam=float(lam), alpha=alpha, asymptotic_size=size_fn(float(lam), alpha), test=test)
        for lam in grid
    ]
