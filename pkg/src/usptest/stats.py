"""Population measures and test statistics.

Implements the chi-squared divergence between two distributions, the
dependence measure D (squared distance of a joint law from the product of
its margins), Pearson's chi-squared statistic, the G statistic, the USP
test statistic (U-hat), the full unbiased estimator of D (D-hat), and a
brute-force kernel-average oracle for D-hat used only in testing.

U-hat and D-hat differ by terms that depend on the data only through the
margins, so over tables sharing margins (e.g. permuted tables) they induce
the same ranking; both may be negative even though D itself never is.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from .errors import (
    DivergenceUndefined,
    DomainError,
    SampleTooLargeForOracle,
    SampleTooSmall,
    UndefinedStatistic,
)
from .table import ContingencyTable, JointDistribution

__all__ = [
    "StatisticValue",
    "chi2_divergence",
    "dependence_measure",
    "pearson_statistic",
    "g_statistic",
    "usp_statistic",
    "dhat_statistic",
    "dhat_bruteforce",
]


@dataclass(frozen=True)
class StatisticValue:
    """A computed test statistic tagged with its kind.

    ``pearson`` and ``g`` values are non-negative whenever defined; ``usp``
    and ``dhat`` estimate a non-negative quantity without bias and may
    therefore be negative.
    """

    value: float
    kind: str  # one of {"pearson", "g", "usp", "dhat"}

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# population measures
# ---------------------------------------------------------------------------


def chi2_divergence(p: JointDistribution, p_ref: JointDistribution) -> float:
    """Chi-squared divergence sum((p - p')^2 / p') of p from reference p'.

    Asymmetric in its arguments.  Cells where both distributions put zero
    mass contribute nothing; a cell with reference mass zero but p mass
    positive makes the divergence undefined.
    """
    if p.shape != p_ref.shape:
        raise DomainError(f"shape mismatch: {p.shape} vs {p_ref.shape}")
    a = p.probs
    b = p_ref.probs
    bad = (b == 0.0) & (a > 0.0)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise DivergenceUndefined(
            f"reference cell ({i},{j}) has zero probability but p has {a[i, j]!r}"
        )
    support = b > 0.0
    diff = a[support] - b[support]
    return float(np.sum(diff * diff / b[support]))


def dependence_measure(p: JointDistribution) -> float:
    """Squared distance of a joint law from the product of its margins.

    Zero exactly when the distribution factorizes (independence); positive
    otherwise.
    """
    diff = p.probs - np.outer(p.row_margins, p.col_margins)
    return float(np.sum(diff * diff))


# ---------------------------------------------------------------------------
# sample statistics
# ---------------------------------------------------------------------------


def _expected(counts: np.ndarray, n: int) -> np.ndarray:
    return np.outer(counts.sum(axis=1), counts.sum(axis=0)) / float(n)


def _require_positive_margins(table: ContingencyTable, kind: str) -> None:
    if table.n == 0 or np.any(table.row_margins == 0) or np.any(table.col_margins == 0):
        raise UndefinedStatistic(
            f"{kind} statistic is undefined: the table has a zero row or column margin"
        )


def _pearson_value(counts: np.ndarray, n: int) -> float:
    # total version: cells in a zero row/column have o = e = 0 and contribute 0
    e = _expected(counts, n)
    support = e > 0.0
    diff = counts[support] - e[support]
    return float(np.sum(diff * diff / e[support]))


def _g_value(counts: np.ndarray, n: int) -> float:
    # total version with the 0 log 0 = 0 convention; o > 0 forces e > 0
    e = _expected(counts, n)
    pos = counts > 0
    o = counts[pos].astype(np.float64)
    return float(2.0 * np.sum(o * np.log(o / e[pos])))


def pearson_statistic(table: ContingencyTable) -> StatisticValue:
    """Pearson's chi-squared statistic sum((o - e)^2 / e).

    Expected counts are e_ij = (row margin i)(column margin j)/n.  Undefined
    when any margin is zero, because then some e_ij = 0; zero rows or
    columns are an explicit error here, never silently dropped.
    """
    _require_positive_margins(table, "pearson")
    return StatisticValue(_pearson_value(table.counts, table.n), "pearson")


def g_statistic(table: ContingencyTable) -> StatisticValue:
    """Likelihood-ratio statistic G = 2 sum(o log(o / e)), with 0 log 0 = 0.

    Same definedness condition as Pearson's statistic: any zero row or
    column margin raises UndefinedStatistic.
    """
    _require_positive_margins(table, "g")
    return StatisticValue(_g_value(table.counts, table.n), "g")


def _usp_value(counts: np.ndarray, n: int) -> float:
    e = _expected(counts, n)
    diff = counts - e
    sq = float(np.sum(diff * diff))
    cross = float(np.sum(counts * e))
    return sq / (n * (n - 3.0)) - 4.0 * cross / (n * (n - 2.0) * (n - 3.0))


def usp_statistic(table: ContingencyTable) -> StatisticValue:
    """USP test statistic U-hat.

    U-hat = sum((o - e)^2) / (n(n-3)) - 4 sum(o * e) / (n(n-2)(n-3)).
    Defined for any table with n >= 4, zero margins included; over tables
    sharing margins it ranks identically to the unbiased estimator D-hat.
    """
    if table.n < 4:
        raise SampleTooSmall(f"usp statistic needs n >= 4, got n={table.n}")
    return StatisticValue(_usp_value(table.counts, table.n), "usp")


def dhat_statistic(table: ContingencyTable) -> StatisticValue:
    """Unbiased estimator D-hat of the dependence measure.

    Equals U-hat plus three margin-only correction terms:

        D-hat = U-hat
                + (sum_i o_i+^2 + sum_j o_+j^2) / (n(n-1)(n-3))
                + (3n-2) (sum_i o_i+^2)(sum_j o_+j^2) / (n^3 (n-1)(n-2)(n-3))
                - n / ((n-1)(n-3))

    Unbiased for dependence_measure of the sampling law; requires n >= 4.
    """
    if table.n < 4:
        raise SampleTooSmall(f"dhat statistic needs n >= 4, got n={table.n}")
    n = float(table.n)
    # python floats throughout: margin power sums reach n^5 and would
    # overflow int64 aggregation for large n
    sum_row_sq = float(np.sum(table.row_margins.astype(np.float64) ** 2))
    sum_col_sq = float(np.sum(table.col_margins.astype(np.float64) ** 2))
    value = (
        _usp_value(table.counts, table.n)
        + (sum_row_sq + sum_col_sq) / (n * (n - 1.0) * (n - 3.0))
        + (3.0 * n - 2.0) * sum_row_sq * sum_col_sq / (n**3 * (n - 1.0) * (n - 2.0) * (n - 3.0))
        - n / ((n - 1.0) * (n - 3.0))
    )
    return StatisticValue(value, "dhat")


_ORACLE_MAX_N = 12


def dhat_bruteforce(pairs: Sequence[tuple[int, int]]) -> float:
    """Kernel-average oracle for D-hat, from raw (row, column) observations.

    Averages, over all n(n-1)(n-2)(n-3) ordered 4-tuples of distinct
    observation indices (a, b, c, d), the kernel

        h = 1{x_a = x_b, y_a = y_b} - 2 * 1{x_a = x_b, y_a = y_c}
            + 1{x_a = x_c, y_b = y_d}.

    Exponential-time reference implementation used to pin dhat_statistic;
    guarded to 4 <= n <= 12.
    """
    xs = [int(x) for x, _ in pairs]
    ys = [int(y) for _, y in pairs]
    n = len(xs)
    if n < 4:
        raise SampleTooSmall(f"kernel average needs at least 4 observations, got {n}")
    if n > _ORACLE_MAX_N:
        raise SampleTooLargeForOracle(
            f"brute-force oracle is limited to {_ORACLE_MAX_N} observations, got {n}"
        )
    total = 0
    for a, b, c, d in permutations(range(n), 4):
        if xs[a] == xs[b]:
            if ys[a] == ys[b]:
                total += 1
            if ys[a] == ys[c]:
                total -= 2
        if xs[a] == xs[c] and ys[b] == ys[d]:
            total += 1
    return total / (n * (n - 1) * (n - 2) * (n - 3))
