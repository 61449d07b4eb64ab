"""Margin-preserving permutation tests and classic chi-squared-quantile tests.

Permuted tables are generated directly from cell counts, one row at a time,
by multivariate hypergeometric draws conditioned on the remaining column
margins.  That reproduces exactly the distribution induced by re-pairing the
column labels with a uniformly random permutation of the row labels, without
ever materializing the n underlying observations.  A label-shuffle reference
implementation is kept for distribution-equality testing.

P-values are rank-based.  With the default randomized tie policy the test is
exact: under independence the p-value is uniform on {1/(B+1), ..., 1}, so
the rejection probability at level alpha is exactly alpha whenever
alpha(B+1) is an integer, and conservative otherwise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidMode
from .numerics import RandomStream, as_generator, chi2_cdf
from .stats import (
    StatisticValue,
    _g_value,
    _pearson_value,
    g_statistic,
    pearson_statistic,
    usp_statistic,
)
from .table import ContingencyTable

__all__ = [
    "PermutationConfig",
    "TestResult",
    "permuted_table",
    "permuted_table_by_shuffle",
    "permutation_pvalue",
    "run_test",
    "METHODS",
    "MODES",
]

METHODS = ("usp", "pearson", "g")
MODES = ("permutation", "classic")


@dataclass(frozen=True)
class PermutationConfig:
    """Everything needed to make a permutation run reproducible.

    Parameters
    ----------
    B : int
        Number of permuted tables, >= 1.
    alpha : float
        Nominal level in (0, 1).
    seed : int
        Master seed (64-bit unsigned) for the permutation stream.
    tie_policy : str
        "randomized" breaks rank ties uniformly at random (exact size);
        "conservative" counts ties against rejection (never anti-conservative).
    """

    B: int = 999
    alpha: float = 0.05
    seed: int = 0
    tie_policy: str = "randomized"

    def __post_init__(self) -> None:
        if self.B < 1:
            raise DomainError(f"B must be >= 1, got {self.B}")
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.tie_policy not in ("randomized", "conservative"):
            raise DomainError(f"unknown tie policy {self.tie_policy!r}")
        if self.alpha * (self.B + 1) < 1.0:
            warnings.warn(
                f"alpha*(B+1) = {self.alpha * (self.B + 1):.3g} < 1: the smallest "
                f"attainable p-value 1/(B+1) exceeds alpha, so the test can never reject",
                stacklevel=2,
            )


@dataclass(frozen=True)
class TestResult:
    """Outcome of a single test run.

    ``B`` is set in permutation mode only, ``df`` in classic mode only.
    ``reject`` always equals ``p_value <= alpha``; permutation p-values are
    exact multiples of 1/(B+1).
    """

    method: str
    mode: str
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    B: int | None
    df: int | None
    seed: int


def permuted_table(
    table: ContingencyTable, rng: RandomStream | np.random.Generator
) -> ContingencyTable:
    """Draw a table uniformly from the re-pairing distribution given margins.

    The output has exactly the input's row and column margins, distributed
    as the table obtained by pairing the row labels with a uniformly random
    permutation of the column labels (multivariate hypergeometric over
    tables with fixed margins).  Cost is O(IJ)-ish per draw, independent of n.
    """
    gen = as_generator(rng)
    counts = table.counts
    n_rows = counts.shape[0]
    out = np.empty_like(counts)
    remaining = table.col_margins.copy()
    for i in range(n_rows - 1):
        row = gen.multivariate_hypergeometric(
            remaining, int(table.row_margins[i]), method="marginals"
        )
        out[i] = row
        remaining -= row
    out[n_rows - 1] = remaining
    return ContingencyTable._from_valid_counts(out)


def permuted_table_by_shuffle(
    table: ContingencyTable, rng: RandomStream | np.random.Generator
) -> ContingencyTable:
    """O(n) reference implementation of :func:`permuted_table`.

    Expands the table to its n (row, column) observations, shuffles the
    column labels against the row labels, and re-tabulates.  Used to verify
    the count-only generator samples the same distribution.
    """
    gen = as_generator(rng)
    n_rows, n_cols = table.shape
    rows = np.repeat(np.arange(n_rows), table.row_margins)
    cols = np.repeat(np.arange(n_cols), table.col_margins)
    cols = gen.permutation(cols)
    flat = np.bincount(rows * n_cols + cols, minlength=n_rows * n_cols)
    return ContingencyTable._from_valid_counts(
        flat.reshape(n_rows, n_cols).astype(np.int64)
    )


def permutation_pvalue(
    table: ContingencyTable,
    statistic: Callable[[ContingencyTable], object],
    config: PermutationConfig,
    stream: RandomStream,
) -> tuple[float, float]:
    """Rank-based permutation p-value of a statistic on a table.

    Computes T0 on the data and T1..TB on B independent margin-preserving
    permuted tables.  With randomized ties,

        p = (1 + #{b: Tb > T0} + U) / (B + 1),  U uniform on {0, ..., #ties},

    which makes p uniform over {1/(B+1), ..., 1} under the null; the
    conservative policy counts every tie as an exceedance.

    Each permuted table is drawn from its own child stream keyed by the
    permutation index, so results are identical for any execution order or
    worker count.

    Returns
    -------
    (statistic, p_value)
    """
    if not isinstance(stream, RandomStream):
        raise TypeError("permutation_pvalue needs a RandomStream to derive per-permutation streams")
    t0 = float(statistic(table))
    B = config.B
    perm_stats = np.empty(B, dtype=np.float64)
    for b in range(B):
        # child 0 is reserved for the tie-break draw
        pt = permuted_table(table, stream.child(b + 1))
        perm_stats[b] = float(statistic(pt))
    greater = int(np.count_nonzero(perm_stats > t0))
    ties = int(np.count_nonzero(perm_stats == t0))
    if config.tie_policy == "randomized":
        u = int(stream.child(0).generator().integers(0, ties + 1)) if ties else 0
        rank = 1 + greater + u
    else:
        rank = 1 + greater + ties
    return t0, rank / (B + 1.0)


def _classic_statistic(table: ContingencyTable, method: str) -> float:
    if method == "pearson":
        return pearson_statistic(table).value
    return g_statistic(table).value


def _permutation_statistic_fn(method: str) -> Callable[[ContingencyTable], float]:
    # Permutation mode conditions on the margins, which every permuted table
    # shares with the data, so zero rows/columns stay zero throughout the
    # run.  Pearson and G are therefore computed in their total form (empty
    # rows and columns contribute nothing): the procedure is exactly the
    # permutation test on the nonempty support, and remains defined for
    # tables where the classic-mode statistics raise UndefinedStatistic.
    if method == "usp":
        return lambda t: usp_statistic(t).value
    if method == "pearson":
        return lambda t: _pearson_value(t.counts, t.n)
    return lambda t: _g_value(t.counts, t.n)


def run_test(
    table: ContingencyTable,
    method: str,
    mode: str,
    config: PermutationConfig | None = None,
    stream: RandomStream | None = None,
) -> TestResult:
    """Run one independence test on a table and report a :class:`TestResult`.

    Parameters
    ----------
    method : {"usp", "pearson", "g"}
    mode : {"permutation", "classic"}
        Classic mode compares the statistic to the chi-squared distribution
        with (I-1)(J-1) degrees of freedom and is valid for pearson and g
        only; usp has no classic reference law here.
    config : PermutationConfig, optional
        Level, permutation count, seed, tie policy.  Defaults apply.
    stream : RandomStream, optional
        Permutation stream override; defaults to RandomStream(config.seed).
        Simulation drivers pass per-replicate children so that every
        replicate is independently reproducible.
    """
    if method not in METHODS:
        raise InvalidMode(f"unknown method {method!r}; expected one of {METHODS}")
    if mode not in MODES:
        raise InvalidMode(f"unknown mode {mode!r}; expected one of {MODES}")
    if config is None:
        config = PermutationConfig()
    if mode == "classic":
        if method == "usp":
            raise InvalidMode("usp has no classic mode; use mode='permutation'")
        stat = _classic_statistic(table, method)
        df = (table.I - 1) * (table.J - 1)
        if df < 1:
            raise DomainError(
                f"classic mode needs at least a 2x2 table, got {table.I}x{table.J}"
            )
        p_value = 1.0 - chi2_cdf(stat, df)
        return TestResult(
            method=method,
            mode=mode,
            statistic=stat,
            p_value=p_value,
            reject=p_value <= config.alpha,
            alpha=config.alpha,
            B=None,
            df=df,
            seed=config.seed,
        )
    if stream is None:
        stream = RandomStream(config.seed)
    stat, p_value = permutation_pvalue(
        table, _permutation_statistic_fn(method), config, stream
    )
    return TestResult(
        method=method,
        mode=mode,
        statistic=stat,
        p_value=p_value,
        reject=p_value <= config.alpha,
        alpha=config.alpha,
        B=config.B,
        df=None,
        seed=config.seed,
    )
