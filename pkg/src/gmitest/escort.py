"""Power escort transform p -> p**lam / sum(p**lam) for vectors and tables.

Zero cells stay zero.  Weights are formed in log space and shifted by
their maximum before exponentiating, so tiny cells raised to large
exponents neither underflow the normalizer to zero nor lose the
relative sizes of the surviving cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DomainError
from .tables import ProbTable, as_probs


def check_lambda(lam) -> float:
    lam = float(lam)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"escort exponent must be a positive finite number, got {lam!r}")
    return lam


@dataclass(frozen=True)
class EscortTable:
    """Escort distribution of a table and its normalizer ``sum(p**lam)``."""

    escort: ProbTable
    c_lambda: float
    log_c_lambda: float
    lam: float


def _escort(p: np.ndarray, lam: float) -> tuple[np.ndarray, float]:
    """Escort of an arbitrary-shape nonnegative array; returns (escort, log c)."""
    support = p > 0
    if not support.any():
        raise DegenerateInput("escort of a distribution with no positive cell")
    logw = lam * np.log(p[support])
    shift = logw.max()
    w = np.exp(logw - shift)
    total = w.sum()
    q = np.zeros_like(p, dtype=np.float64)
    q[support] = w / total
    return q, float(shift + math.log(total))


def power_escort_vector(dist, lam) -> tuple[np.ndarray, float]:
    """Escort of a probability vector; returns ``(escort, normalizer)``."""
    lam = check_lambda(lam)
    p = np.asarray(dist, dtype=np.float64)
    if p.ndim != 1 or np.any(p < 0):
        raise ValueError("expected a 1-D nonnegative probability vector")
    q, log_c = _escort(p, lam)
    return q, math.exp(log_c)


def power_escort_table(dist, lam) -> EscortTable:
    lam = check_lambda(lam)
    q, log_c = _escort(as_probs(dist), lam)
    return EscortTable(ProbTable(q / q.sum()), math.exp(log_c), log_c, lam)


def inverse_escort(table, lam) -> ProbTable:
    """Recover the source table from its escort (escort with exponent 1/lam)."""
    lam = check_lambda(lam)
    if isinstance(table, EscortTable):
        table = table.escort
    q, _ = _escort(as_probs(table), 1.0 / lam)
    return ProbTable(q / q.sum())
