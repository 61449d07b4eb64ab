"""Contingency tables, joint distributions, margins, and sampling.

A :class:`ContingencyTable` is an immutable I x J matrix of non-negative
integer counts with derived margins; a :class:`JointDistribution` is the
population analogue, a cell-probability matrix summing to one.  Sampling
routines draw tables from a distribution (multinomial) or shrink a table
without replacement (multivariate hypergeometric), each driven by an
explicit random stream so parallel callers stay reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DomainError,
    EmptySample,
    EmptyTable,
    NegativeCount,
    SubsampleTooLarge,
)
from .numerics import RandomStream, as_generator

__all__ = [
    "ContingencyTable",
    "JointDistribution",
    "validate_table",
    "expected_counts",
    "sample_table",
    "subsample",
]

_PROB_SUM_TOL = 1e-12  # family constructors are analytically normalized


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class ContingencyTable:
    """Immutable matrix of cell counts with derived margins.

    Attributes
    ----------
    counts : ndarray of int64, shape (I, J)
        Cell counts; read-only.
    row_margins, col_margins : ndarray of int64
        Row sums and column sums of ``counts``.
    n : int
        Total count over all cells.
    """

    __slots__ = ("counts", "row_margins", "col_margins", "n")

    def __init__(self, counts) -> None:
        arr = _coerce_counts(counts)
        self._init_from(arr)

    def _init_from(self, arr: np.ndarray) -> None:
        object.__setattr__(self, "counts", _freeze(arr))
        object.__setattr__(self, "row_margins", _freeze(arr.sum(axis=1)))
        object.__setattr__(self, "col_margins", _freeze(arr.sum(axis=0)))
        object.__setattr__(self, "n", int(arr.sum()))

    @classmethod
    def _from_valid_counts(cls, arr: np.ndarray) -> "ContingencyTable":
        # internal fast path for sampling loops; arr must already be a fresh
        # non-negative int64 matrix
        self = object.__new__(cls)
        self._init_from(arr)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("ContingencyTable is immutable")

    @property
    def I(self) -> int:
        return self.counts.shape[0]

    @property
    def J(self) -> int:
        return self.counts.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return self.counts.shape == other.counts.shape and bool(
            np.array_equal(self.counts, other.counts)
        )

    def __hash__(self):
        return hash((self.counts.shape, self.counts.tobytes()))

    def __repr__(self) -> str:
        return f"ContingencyTable({self.counts.tolist()!r})"


def _coerce_counts(raw) -> np.ndarray:
    try:
        arr = np.asarray(raw)
    except ValueError as exc:  # ragged nested sequences
        raise DomainError(f"table must be rectangular: {exc}") from None
    if arr.size == 0:
        raise EmptyTable(f"table must have at least one row and one column, got shape {arr.shape}")
    if arr.ndim != 2:
        raise DomainError(f"table must be a 2-d matrix, got {arr.ndim} dimension(s)")
    if arr.dtype == object:
        raise DomainError("table entries must be numeric")
    if np.issubdtype(arr.dtype, np.floating):
        if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
            i, j = _first_offender(~np.isfinite(arr) | (arr != np.floor(arr)))
            raise DomainError(f"cell ({i},{j}) is not an integer: {arr[i, j]!r}")
        arr = arr.astype(np.int64)
    elif not np.issubdtype(arr.dtype, np.integer):
        raise DomainError(f"table entries must be integers, got dtype {arr.dtype}")
    if np.any(arr < 0):
        i, j = _first_offender(arr < 0)
        raise NegativeCount(f"cell ({i},{j}) is negative: {arr[i, j]}")
    # always copy so freezing never touches a caller-owned buffer
    return np.array(arr, dtype=np.int64, order="C", copy=True)


def _first_offender(mask: np.ndarray) -> tuple[int, int]:
    i, j = np.argwhere(mask)[0]
    return int(i), int(j)


def validate_table(raw) -> ContingencyTable:
    """Validate a raw count matrix and wrap it as a :class:`ContingencyTable`.

    Raises
    ------
    NegativeCount
        If any entry is negative.
    EmptyTable
        If the matrix has zero rows or zero columns.
    DomainError
        If the input is ragged, not 2-d, or not integral.
    """
    return ContingencyTable(raw)


class JointDistribution:
    """Immutable cell-probability matrix with derived margins.

    Entries must lie in [0, 1] and sum to 1 within 1e-12 absolute.
    ``row_margins`` and ``col_margins`` are the marginal laws of the row and
    column variables.
    """

    __slots__ = ("probs", "row_margins", "col_margins")

    def __init__(self, probs) -> None:
        arr = np.asarray(probs, dtype=np.float64)
        if arr.ndim != 2:
            raise DomainError(f"distribution must be a 2-d matrix, got {arr.ndim} dimension(s)")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise EmptyTable(
                f"distribution must have at least one row and one column, got shape {arr.shape}"
            )
        if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
            i, j = _first_offender((arr < 0.0) | (arr > 1.0) | ~np.isfinite(arr))
            raise DomainError(f"cell ({i},{j}) probability {arr[i, j]!r} is outside [0, 1]")
        total = float(arr.sum())
        if abs(total - 1.0) > _PROB_SUM_TOL:
            raise DomainError(f"probabilities must sum to 1 within {_PROB_SUM_TOL}, got {total!r}")
        arr = np.array(arr, dtype=np.float64, order="C", copy=True)
        object.__setattr__(self, "probs", _freeze(arr))
        object.__setattr__(self, "row_margins", _freeze(arr.sum(axis=1)))
        object.__setattr__(self, "col_margins", _freeze(arr.sum(axis=0)))

    def __setattr__(self, name, value):
        raise AttributeError("JointDistribution is immutable")

    @property
    def I(self) -> int:
        return self.probs.shape[0]

    @property
    def J(self) -> int:
        return self.probs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def is_product(self, tol: float = 0.0) -> bool:
        """True if every cell equals the product of its margins within tol."""
        outer = np.outer(self.row_margins, self.col_margins)
        return bool(np.all(np.abs(self.probs - outer) <= tol))

    def __repr__(self) -> str:
        return f"JointDistribution({self.probs.tolist()!r})"


def expected_counts(table: ContingencyTable) -> np.ndarray:
    """Expected cell counts under independence: row margin x column margin / n.

    Raises
    ------
    EmptySample
        If the table contains no observations.
    """
    if table.n == 0:
        raise EmptySample("expected counts need at least one observation")
    return np.outer(table.row_margins, table.col_margins) / float(table.n)


def sample_table(
    dist: JointDistribution, n: int, rng: RandomStream | np.random.Generator
) -> ContingencyTable:
    """Draw a table of n observations i.i.d. from a joint distribution.

    Cell counts jointly follow the multinomial law with the distribution's
    cell probabilities; the draw costs O(IJ) regardless of n.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"sample size must be a non-negative integer, got {n}")
    gen = as_generator(rng)
    flat = gen.multinomial(int(n), dist.probs.ravel())
    return ContingencyTable._from_valid_counts(flat.reshape(dist.shape).astype(np.int64))


def subsample(
    table: ContingencyTable, m: int, rng: RandomStream | np.random.Generator
) -> ContingencyTable:
    """Draw m of the table's n observations uniformly without replacement.

    The result is multivariate hypergeometric over cells: equivalent to
    picking m of the n underlying individuals at random, but computed
    directly from counts in O(IJ).
    """
    if m < 0 or int(m) != m:
        raise DomainError(f"subsample size must be a non-negative integer, got {m}")
    if m > table.n:
        raise SubsampleTooLarge(f"subsample size {m} exceeds table total {table.n}")
    gen = as_generator(rng)
    flat = gen.multivariate_hypergeometric(table.counts.ravel(), int(m), method="marginals")
    return ContingencyTable._from_valid_counts(flat.reshape(table.shape).astype(np.int64))
