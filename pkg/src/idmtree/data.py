"""Categorical datasets and contingency tables."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

__all__ = [
    "DataError", "Variable", "Dataset", "ContingencyTable",
    "ingest", "read_csv", "single_counts", "pair_counts", "triple_counts",
]


class DataError(ValueError):
    """Malformed input data or an invalid table request."""


@dataclass(frozen=True)
class Variable:
    name: str
    categories: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.categories)


class Dataset:
    """Complete categorical sample; rows hold category indices per variable.

    Immutable once built: the index matrix is marked read-only.
    """

    def __init__(self, variables: Sequence[Variable], rows):
        rows = np.array(rows, dtype=np.int64, copy=True)
        if rows.ndim != 2 or rows.shape[1] != len(variables):
            raise DataError("rows must be an (n, m) matrix matching the variables")
        arities = np.array([v.arity for v in variables], dtype=np.int64)
        if rows.size and ((rows < 0).any() or (rows >= arities).any()):
            raise DataError("category index out of range")
        rows.setflags(write=False)
        self.variables = tuple(variables)
        self.rows = rows

    @classmethod
    def from_labels(cls, names: Sequence[str], records: Iterable[Sequence[str]]) -> "Dataset":
        """Encode string records, numbering categories by first appearance per column."""
        names = list(names)
        lookup: list[dict[str, int]] = [{} for _ in names]
        encoded = []
        for rec in records:
            if len(rec) != len(names):
                raise DataError(f"row {len(encoded) + 1} has {len(rec)} fields, expected {len(names)}")
            idx = []
            for col, value in enumerate(rec):
                if value == "":
                    raise DataError(f"empty cell in row {len(encoded) + 1}, column {names[col]!r}")
                idx.append(lookup[col].setdefault(value, len(lookup[col])))
            encoded.append(idx)
        if not encoded:
            raise DataError("dataset has no observations")
        variables = [Variable(name, tuple(table)) for name, table in zip(names, lookup)]
        return cls(variables, np.array(encoded, dtype=np.int64).reshape(len(encoded), len(names)))

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def m(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def arities(self) -> list[int]:
        return [v.arity for v in self.variables]

    def head(self, n: int) -> "Dataset":
        """First ``n`` rows, re-encoded so unseen categories disappear."""
        return Dataset.from_labels(self.names, self.labels()[:n])

    def labels(self) -> list[list[str]]:
        cats = [v.categories for v in self.variables]
        return [[cats[j][k] for j, k in enumerate(row)] for row in self.rows.tolist()]

    def to_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.names)
        writer.writerows(self.labels())

    def __repr__(self):
        return f"Dataset(m={self.m}, n={self.n}, arities={self.arities})"


def ingest(stream: TextIO) -> Dataset:
    """Read a header-first CSV stream (RFC 4180 quoting) into a Dataset."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: no header row") from None
    except csv.Error as exc:
        raise DataError(f"CSV parse error: {exc}") from None
    if not header or any(h == "" for h in header):
        raise DataError("header has empty variable names")
    if len(set(header)) != len(header):
        raise DataError("duplicate variable names in header")
    try:
        records = [row for row in reader if row != []]
    except csv.Error as exc:
        raise DataError(f"CSV parse error: {exc}") from None
    return Dataset.from_labels(header, records)


def read_csv(path) -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        return ingest(fh)


class ContingencyTable:
    """Integer co-occurrence counts over one, two or three variables."""

    def __init__(self, counts):
        arr = np.asarray(counts)
        if arr.ndim not in (1, 2, 3) or arr.size == 0:
            raise DataError("contingency tables have 1 to 3 nonempty axes")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.equal(np.mod(arr, 1), 0)):
                raise DataError("counts must be integers")
        arr = arr.astype(np.int64)
        if (arr < 0).any():
            raise DataError("counts must be nonnegative")
        arr.setflags(write=False)
        self.counts = arr

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, ...]:
        return self.counts.shape

    @property
    def ndim(self) -> int:
        return self.counts.ndim

    def marginal(self, *keep: int) -> "ContingencyTable":
        """Sum out every axis not listed in ``keep`` (kept axes stay in order)."""
        drop = tuple(ax for ax in range(self.ndim) if ax not in keep)
        return ContingencyTable(self.counts.sum(axis=drop))

    def transpose(self, *axes: int) -> "ContingencyTable":
        return ContingencyTable(np.transpose(self.counts, axes or None))

    def __eq__(self, other):
        return isinstance(other, ContingencyTable) and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"ContingencyTable({self.counts.tolist()})"


def _tabulate(ds: Dataset, idx: Sequence[int]) -> ContingencyTable:
    for i in idx:
        if not 0 <= i < ds.m:
            raise DataError(f"variable index {i} out of range")
    if len(set(idx)) != len(idx):
        raise DataError(f"variable indices must be distinct, got {tuple(idx)}")
    shape = tuple(ds.variables[i].arity for i in idx)
    flat = np.ravel_multi_index(tuple(ds.rows[:, i] for i in idx), shape)
    counts = np.bincount(flat, minlength=int(np.prod(shape))).reshape(shape)
    return ContingencyTable(counts)


def single_counts(ds: Dataset, a: int) -> ContingencyTable:
    return _tabulate(ds, [a])


def pair_counts(ds: Dataset, a: int, b: int) -> ContingencyTable:
    return _tabulate(ds, [a, b])


def triple_counts(ds: Dataset, a: int, b: int, c: int) -> ContingencyTable:
    return _tabulate(ds, [a, b, c])


def dataset_from_text(text: str) -> Dataset:
    return ingest(io.StringIO(text))
