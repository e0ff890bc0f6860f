"""Generalized (escort) mutual information test of independence.

The escort mutual information MI(X*, Y*) is split into two pieces,

    t_a = -H(X*, Y*) + H(esc(p_X)) + H(esc(p_Y))
    t_b = -H(esc(p_X)) - H(esc(p_Y)) + H(X*) + H(Y*)

where esc(p_X) is the escort of the row marginal and X* is the row
marginal of the joint escort.  Both pieces vanish under independence,
but unlike their sum each one is root-n (not n) convergent, so
sqrt(n) * t_hat / sigma_hat is asymptotically standard normal.  The
variance comes from the delta method applied to t_a with multinomial
covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .entropy import shannon_entropy
from .errors import (
    DegenerateVariance,
    DomainError,
    InsufficientSupport,
    ZeroCellInSupport,
    ZeroSample,
)
from .escort import _escort, check_lambda
from .results import Method, TestResult, decide
from .special import normal_sf
from .tables import as_counts, as_probs, restrict_to_support

DEGENERATE_SIGMA2 = 1e-12
UNIFORM_TOL = 1e-9


@dataclass(frozen=True)
class GmiDecomposition:
    t_a: float
    t_b: float
    c_lambda: float
    h_joint_escort: float
    h_escort_row_marg: float
    h_escort_col_marg: float
    h_row_marg_escort: float
    h_col_marg_escort: float


@dataclass(frozen=True)
class VarianceEstimate:
    """Delta-method variance of sqrt(n) * t_a.

    ``gradient`` is taken in the free parameterization over the positive
    cells in row-major order, with the last positive cell eliminated.
    """

    sigma2: float
    gradient: np.ndarray
    degenerate: bool


class ZStatistics(NamedTuple):
    z_a: float
    z_b: float
    z_ab: float
    variance: VarianceEstimate
    decomposition: GmiDecomposition
    n: int
    i_hat: int
    j_hat: int


class _Parts(NamedTuple):
    q: np.ndarray  # joint escort
    a: np.ndarray  # escort of row marginal
    b: np.ndarray  # escort of column marginal
    decomposition: GmiDecomposition


def _parts(p: np.ndarray, lam: float) -> _Parts:
    q, log_c = _escort(p, lam)
    a, _ = _escort(p.sum(axis=1), lam)
    b, _ = _escort(p.sum(axis=0), lam)
    h_joint = shannon_entropy(q)
    h_a = shannon_entropy(a)
    h_b = shannon_entropy(b)
    h_qr = shannon_entropy(q.sum(axis=1))
    h_qc = shannon_entropy(q.sum(axis=0))
    dec = GmiDecomposition(
        t_a=-h_joint + h_a + h_b,
        t_b=-h_a - h_b + h_qr + h_qc,
        c_lambda=math.exp(log_c),
        h_joint_escort=h_joint,
        h_escort_row_marg=h_qr,
        h_escort_col_marg=h_qc,
        h_row_marg_escort=h_a,
        h_col_marg_escort=h_b,
    )
    return _Parts(q, a, b, dec)


def gmi_decompose(dist, lam) -> GmiDecomposition:
    """Entropy building blocks of the escort mutual information and its t_a / t_b split."""
    lam = check_lambda(lam)
    return _parts(as_probs(dist), lam).decomposition


def _cell_partials(p: np.ndarray, lam: float, parts: _Parts) -> np.ndarray:
    """dT_A/dp_ij with every cell treated as a free variable.

    Uses dH(w / sum w)/dw_k = -(ln q_k + H) / sum(w).  Zero cells get 0;
    they carry no multinomial variance.
    """
    q, a, b, dec = parts
    pos = p > 0
    r = p.sum(axis=1)
    s = p.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        joint = np.where(pos, lam * q / p * (np.log(q) + dec.h_joint_escort), 0.0)
        row = np.where(r > 0, lam * a / r * (np.log(a) + dec.h_row_marg_escort), 0.0)
        col = np.where(s > 0, lam * b / s * (np.log(b) + dec.h_col_marg_escort), 0.0)
    g = joint - row[:, None] - col[None, :]
    return np.where(pos, g, 0.0)


def grad_t_a(dist, lam) -> np.ndarray:
    """Gradient of t_a over the IJ - 1 free cells (cell (I, J) eliminated).

    Requires every cell to be strictly positive.
    """
    lam = check_lambda(lam)
    p = as_probs(dist)
    if np.any(p <= 0):
        raise ZeroCellInSupport("gradient needs a strictly positive table")
    g = _cell_partials(p, lam, _parts(p, lam)).ravel()
    return g[:-1] - g[-1]


def _variance(p: np.ndarray, lam: float, parts: _Parts) -> VarianceEstimate:
    g = _cell_partials(p, lam, parts)[p > 0]
    v = p[p > 0]
    free = g[:-1] - g[-1]
    v = v[:-1]
    gv = float(np.dot(free, v))
    sigma2 = float(np.dot(free * free, v)) - gv * gv
    return VarianceEstimate(sigma2, free, not sigma2 >= DEGENERATE_SIGMA2)


def sigma2_of(dist, lam) -> VarianceEstimate:
    """Delta-method variance grad' (diag(v) - v v') grad on a strictly positive table."""
    lam = check_lambda(lam)
    p = as_probs(dist)
    if np.any(p <= 0):
        raise ZeroCellInSupport("variance needs a strictly positive table")
    return _variance(p, lam, _parts(p, lam))


def select_zab(z_a: float, z_b: float) -> float:
    """The larger-magnitude of the two statistics; ties go to z_a."""
    return z_a if abs(z_a) >= abs(z_b) else z_b


def _require_testing_lambda(lam) -> float:
    lam = check_lambda(lam)
    if lam == 1.0:
        raise DomainError("lambda must differ from 1: the t_a/t_b split has zero variance at lambda = 1")
    return lam


def z_statistics(counts, lam) -> ZStatistics:
    """Z_A, Z_B and Z_AB on the observed support of a counts table.

    Rows and columns with zero totals are dropped first; zero cells
    inside the remaining block contribute nothing to entropies or to
    the variance.
    """
    lam = _require_testing_lambda(lam)
    t = as_counts(counts)
    n = t.n
    if n == 0:
        raise ZeroSample("z statistics of an empty table")
    sub = restrict_to_support(t)
    i_hat, j_hat = sub.shape
    if i_hat < 2 or j_hat < 2:
        raise InsufficientSupport(
            f"need at least 2 occupied rows and columns, observed {i_hat}x{j_hat}"
        )
    p = sub.counts / n
    parts = _parts(p, lam)
    var = _variance(p, lam, parts)
    if var.degenerate:
        raise DegenerateVariance(f"estimated variance {var.sigma2:.3g} is numerically zero")
    scale = math.sqrt(n) / math.sqrt(var.sigma2)
    z_a = scale * parts.decomposition.t_a
    z_b = scale * parts.decomposition.t_b
    return ZStatistics(
        z_a, z_b, select_zab(z_a, z_b), var, parts.decomposition, n, i_hat, j_hat
    )


def two_sided_p_value(z: float) -> float:
    return min(1.0, 2.0 * normal_sf(abs(z)))


def _is_uniform(v: np.ndarray) -> bool:
    return bool(np.max(np.abs(v - 1.0 / v.size)) <= UNIFORM_TOL)


def advisories(counts, sparsity_threshold: float = 5.0) -> list[str]:
    """Advisory warnings about sparse tables and uniform observed marginals."""
    sub = restrict_to_support(counts)
    n = sub.n
    i_hat, j_hat = sub.shape
    out = []
    ratio = n / (i_hat * j_hat)
    if ratio < sparsity_threshold:
        out.append(
            f"sparse table: n/(I_hat*J_hat) = {ratio:.3g} < {sparsity_threshold:g} (advisory)"
        )
    if _is_uniform(sub.counts.sum(axis=1) / n) or _is_uniform(sub.counts.sum(axis=0) / n):
        out.append("an observed marginal is uniform; the normal approximation may not hold")
    return out


def gmi_test(
    counts,
    lam=2.0,
    alpha: float = 0.01,
    method: Method | str = Method.ZAB,
    sparsity_threshold: float = 5.0,
) -> TestResult:
    """Two-sided normal test of independence using Z_A, Z_B or Z_AB."""
    method = Method(method)
    if not method.is_gmi:
        raise ValueError(f"{method.value} is not a GMI method")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    zs = z_statistics(counts, lam)
    z = {Method.ZA: zs.z_a, Method.ZB: zs.z_b, Method.ZAB: zs.z_ab}[method]
    p_value = two_sided_p_value(z)
    return TestResult(
        method=method,
        statistic=z,
        p_value=p_value,
        reject=decide(p_value, alpha),
        alpha=alpha,
        i_hat=zs.i_hat,
        j_hat=zs.j_hat,
        n=zs.n,
        lam=float(lam),
        sigma2_hat=zs.variance.sigma2,
        warnings=tuple(advisories(counts, sparsity_threshold)),
    )
