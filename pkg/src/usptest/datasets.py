"""Bundled example contingency tables.

Two small real survey tables, compiled in as constants so the documented
command lines reproduce without any input files.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .table import ContingencyTable

__all__ = ["EmbeddedDataset", "MARITAL", "EYECOLOUR", "DATASET_NAMES", "get_dataset"]


@dataclass(frozen=True)
class EmbeddedDataset:
    """A named, compiled-in contingency table with axis labels."""

    name: str
    table: ContingencyTable
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    description: str


# marital status (rows) by education level (columns) of 300 survey respondents
MARITAL = EmbeddedDataset(
    name="marital",
    table=ContingencyTable(
        [
            [18, 36, 21, 9, 6],
            [12, 36, 45, 36, 21],
            [6, 9, 9, 3, 3],
            [3, 9, 9, 6, 3],
        ]
    ),
    row_labels=("never married", "married", "divorced", "widowed"),
    col_labels=("middle school or lower", "high school", "bachelor's", "master's", "phd or higher"),
    description="marital status by education level, 300 survey respondents",
)

# eye colour (columns) by sex (rows) of 167 individuals
EYECOLOUR = EmbeddedDataset(
    name="eyecolour",
    table=ContingencyTable(
        [
            [20, 30, 10, 15, 10],
            [25, 15, 12, 20, 10],
        ]
    ),
    row_labels=("female", "male"),
    col_labels=("black", "brown", "blue", "green", "grey"),
    description="eye colour by sex, 85 females and 82 males",
)

_DATASETS = {MARITAL.name: MARITAL, EYECOLOUR.name: EYECOLOUR}
DATASET_NAMES = tuple(sorted(_DATASETS))


def get_dataset(name: str) -> EmbeddedDataset:
    """Look up an embedded dataset by name ('marital' or 'eyecolour')."""
    try:
        return _DATASETS[name]
    except KeyError:
        raise DomainError(
            f"unknown dataset {name!r}; available: {', '.join(DATASET_NAMES)}"
        ) from None
