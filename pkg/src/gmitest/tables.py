"""Counts and probability tables, multinomial sampling and CSV I/O."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DegenerateInput, ParseError, ZeroSample

PROB_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CountsTable:
    """Observed I x J frequency matrix."""

    counts: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.counts)
        if raw.ndim != 2 or raw.shape[0] < 1 or raw.shape[1] < 1:
            raise ValueError(f"counts must be a non-empty 2-D matrix, got shape {raw.shape}")
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                raise ValueError("counts must be integers")
        elif raw.dtype.kind not in "iub":
            raise ValueError(f"counts must be integers, got dtype {raw.dtype}")
        if np.any(raw < 0):
            raise ValueError("counts must be nonnegative")
        object.__setattr__(self, "counts", _frozen(raw.astype(np.int64, copy=True)))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def __eq__(self, other):
        if not isinstance(other, CountsTable):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"CountsTable(shape={self.shape}, n={self.n})"


@dataclass(frozen=True, eq=False)
class ProbTable:
    """Joint distribution on an I x J alphabet together with its marginals."""

    probs: np.ndarray
    row_marginals: np.ndarray = field(init=False)
    col_marginals: np.ndarray = field(init=False)

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"probs must be a non-empty 2-D matrix, got shape {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and nonnegative")
        total = p.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", _frozen(p))
        object.__setattr__(self, "row_marginals", _frozen(p.sum(axis=1)))
        object.__setattr__(self, "col_marginals", _frozen(p.sum(axis=0)))

    @classmethod
    def normalized(cls, weights) -> ProbTable:
        """Build a table from nonnegative weights by dividing by their sum."""
        w = np.asarray(weights, dtype=np.float64)
        total = w.sum()
        if not total > 0:
            raise DegenerateInput("weights have no positive mass")
        return cls(w / total)

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def __eq__(self, other):
        if not isinstance(other, ProbTable):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self):
        return f"ProbTable(shape={self.shape})"


class ObservedDims(NamedTuple):
    i_hat: int
    j_hat: int


def as_probs(dist) -> np.ndarray:
    """Return the probability matrix of a ProbTable or a raw 2-D array."""
    if isinstance(dist, ProbTable):
        return dist.probs
    return ProbTable(dist).probs


def as_counts(table) -> CountsTable:
    return table if isinstance(table, CountsTable) else CountsTable(table)


def empirical(table) -> ProbTable:
    """Plug-in distribution f / n."""
    t = as_counts(table)
    n = t.n
    if n == 0:
        raise ZeroSample("empirical distribution of an empty table")
    return ProbTable(t.counts / n)


def observed_dims(table) -> ObservedDims:
    """Number of rows and columns with a positive total."""
    t = as_counts(table)
    if t.n == 0:
        raise ZeroSample("observed dimensions of an empty table")
    return ObservedDims(
        int(np.count_nonzero(t.counts.sum(axis=1))),
        int(np.count_nonzero(t.counts.sum(axis=0))),
    )


def restrict_to_support(table) -> CountsTable:
    """Drop rows and columns whose total is zero."""
    t = as_counts(table)
    if t.n == 0:
        raise ZeroSample("cannot restrict an empty table")
    c = t.counts
    return CountsTable(c[c.sum(axis=1) > 0][:, c.sum(axis=0) > 0])


def product_of_marginals(dist) -> ProbTable:
    """The independence table with the same marginals as ``dist``."""
    d = dist if isinstance(dist, ProbTable) else ProbTable(dist)
    out = np.outer(d.row_marginals, d.col_marginals)
    return ProbTable(out / out.sum())


def sample_multinomial(dist, n: int, seed: int) -> CountsTable:
    """Draw one Multinomial(n, vec(dist)) table.

    The generator is built from ``seed`` alone, so the draw is a pure
    function of ``(dist, n, seed)``.
    """
    p = as_probs(dist)
    if int(n) != n or n < 1:
        raise ValueError(f"sample size must be a positive integer, got {n!r}")
    rng = np.random.default_rng(int(seed) % 2**64)
    flat = p.ravel()
    counts = rng.multinomial(int(n), flat / flat.sum())
    return CountsTable(counts.reshape(p.shape))


def read_counts_csv(path, header: bool = False) -> CountsTable:
    """Parse a comma-separated grid of nonnegative integers.

    Blank lines are ignored.  With ``header=True`` the first line is skipped.
    """
    rows: list[list[int]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        if header:
            next(reader, None)
        for lineno, record in enumerate(reader, start=2 if header else 1):
            if not record or all(not cell.strip() for cell in record):
                continue
            row = []
            for cell in record:
                token = cell.strip()
                try:
                    value = int(token)
                except ValueError:
                    raise ParseError(f"line {lineno}: {token!r} is not an integer") from None
                if value < 0:
                    raise ParseError(f"line {lineno}: negative count {value}")
                row.append(value)
            if rows and len(row) != len(rows[0]):
                raise ParseError(
                    f"line {lineno}: expected {len(rows[0])} columns, found {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return CountsTable(np.array(rows, dtype=np.int64))


def write_counts_csv(table, path) -> None:
    t = as_counts(table)
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(t.counts.tolist())
