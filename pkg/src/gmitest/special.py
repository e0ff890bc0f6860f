"""Normal and chi-squared distribution functions.

Only the standard library is used here so the p-value path does not
depend on scipy.  The regularized upper incomplete gamma function is
evaluated with the usual series / continued-fraction split.
"""

import math

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def normal_cdf(x):
    """Standard normal CDF, Phi(x)."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x):
    """Standard normal upper tail, 1 - Phi(x), without cancellation."""
    return 0.5 * math.erfc(x / _SQRT2)


def normal_pdf(x):
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def normal_quantile(q):
    """Inverse of :func:`normal_cdf` on (0, 1).

    Safeguarded Newton iteration inside a shrinking bisection bracket.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"normal_quantile needs 0 < q < 1, got {q!r}")
    if q == 0.5:
        return 0.0
    # 1 - q is exact for q in (0.5, 1), so reflect into the lower tail.
    if q > 0.5:
        return -normal_quantile(1.0 - q)
    lo, hi = -40.0, 0.0
    z = -1.0
    for _ in range(200):
        f = normal_cdf(z) - q
        if f > 0.0:
            hi = z
        else:
            lo = z
        d = normal_pdf(z)
        step = f / d if d > 0.0 else math.inf
        z_new = z - step
        if not lo < z_new < hi:
            z_new = 0.5 * (lo + hi)
        if abs(z_new - z) <= 1e-15 * max(1.0, abs(z)):
            z = z_new
            break
        z = z_new
    return z


def _lower_gamma_series(a, x):
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_gamma_cf(a, x):
    """Regularized upper incomplete gamma Q(a, x), modified Lentz."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_q(a, x):
    """Regularized upper incomplete gamma function Q(a, x)."""
    if a <= 0.0:
        raise DomainError(f"gamma_q needs a > 0, got {a!r}")
    if x < 0.0:
        raise DomainError(f"gamma_q needs x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_gamma_series(a, x))
    return min(1.0, _upper_gamma_cf(a, x))


def chisq_sf(x, df):
    """Upper tail probability of a chi-squared variable with ``df`` degrees of freedom."""
    if isinstance(df, bool) or int(df) != df or df < 1:
        raise DomainError(f"df must be a positive integer, got {df!r}")
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"chisq_sf needs x >= 0, got {x!r}")
    return gamma_q(0.5 * int(df), 0.5 * x)
