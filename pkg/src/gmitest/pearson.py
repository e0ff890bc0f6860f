"""Pearson chi-squared test of independence, the comparison baseline."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InsufficientSupport, InvalidDf, ZeroSample
from .results import Method, TestResult, decide
from .special import chisq_sf
from .tables import as_counts, restrict_to_support


def _support(counts):
    t = as_counts(counts)
    if t.n == 0:
        raise ZeroSample("Pearson statistic of an empty table")
    sub = restrict_to_support(t)
    if sub.shape[0] < 2 or sub.shape[1] < 2:
        raise InsufficientSupport(
            f"need at least 2 occupied rows and columns, observed {sub.shape[0]}x{sub.shape[1]}"
        )
    return t, sub


def _statistic(sub) -> float:
    f = sub.counts.astype(np.float64)
    n = f.sum()
    expected = np.outer(f.sum(axis=1), f.sum(axis=0)) / n
    return float(np.sum((f - expected) ** 2 / expected))


def pearson_statistic(counts) -> float:
    """sum (f - E)^2 / E with E = row total * column total / n.

    Empty rows and columns are dropped; every remaining expected count is
    positive.
    """
    _, sub = _support(counts)
    return _statistic(sub)


def pearson_test(
    counts,
    alpha: float = 0.01,
    df_mode: str = "observed",
    dims: tuple[int, int] | None = None,
) -> TestResult:
    """Chi-squared test with observed ``(I_hat-1)(J_hat-1)`` or nominal ``(I-1)(J-1)`` df.

    In ``"theoretical"`` mode ``dims`` gives the nominal alphabet sizes;
    without it the matrix shape is used and a warning is attached.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    t, sub = _support(counts)
    i_hat, j_hat = sub.shape
    warnings = []
    if df_mode == "observed":
        method = Method.PEARSON_OBSERVED
        df = (i_hat - 1) * (j_hat - 1)
    elif df_mode == "theoretical":
        method = Method.PEARSON_THEORETICAL
        if dims is None:
            dims = t.shape
            warnings.append(
                f"nominal dimensions not given; using the table shape {dims[0]}x{dims[1]}"
            )
        df = (dims[0] - 1) * (dims[1] - 1)
    else:
        raise ValueError(f"df_mode must be 'observed' or 'theoretical', got {df_mode!r}")
    if df < 1:
        raise InvalidDf(f"degrees of freedom {df} < 1")
    stat = _statistic(sub)
    p_value = chisq_sf(stat, df)
    return TestResult(
        method=method,
        statistic=stat,
        p_value=p_value,
        reject=decide(p_value, alpha),
        alpha=alpha,
        i_hat=i_hat,
        j_hat=j_hat,
        n=t.n,
        df=df,
        warnings=tuple(warnings),
    )
