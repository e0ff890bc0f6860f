"""Plug-in Shannon entropy and mutual information (natural log)."""

from __future__ import annotations

import numpy as np

from .errors import InternalError, ZeroSample
from .escort import _escort, check_lambda
from .tables import ProbTable, as_counts

MI_CLAMP = 1e-12


def shannon_entropy(dist) -> float:
    """-sum p ln p over the positive cells of a vector or table."""
    p = dist.probs if isinstance(dist, ProbTable) else np.asarray(dist, dtype=np.float64)
    p = p[p > 0]
    h = -float(np.sum(p * np.log(p)))
    return max(h, 0.0)


def _mi(p: np.ndarray) -> float:
    raw = (
        shannon_entropy(p.sum(axis=1))
        + shannon_entropy(p.sum(axis=0))
        - shannon_entropy(p)
    )
    if raw < 0.0:
        if raw > -MI_CLAMP:
            return 0.0
        raise InternalError(f"mutual information evaluated to {raw!r}")
    return raw


def mutual_information(joint) -> float:
    """H(rows) + H(cols) - H(joint), clamped at zero against rounding."""
    p = joint.probs if isinstance(joint, ProbTable) else ProbTable(joint).probs
    return _mi(p)


def wilks_statistic(counts, lam) -> float:
    """2n times the plug-in mutual information of the escorted empirical table."""
    lam = check_lambda(lam)
    t = as_counts(counts)
    n = t.n
    if n == 0:
        raise ZeroSample("Wilks statistic of an empty table")
    q, _ = _escort(t.counts / n, lam)
    return 2.0 * n * _mi(q)
