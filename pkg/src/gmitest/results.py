"""Test result record shared by the GMI and Pearson tests."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Method(str, enum.Enum):
    ZAB = "zab"
    ZA = "za"
    ZB = "zb"
    PEARSON_OBSERVED = "pearson-observed"
    PEARSON_THEORETICAL = "pearson-theoretical"

    @property
    def is_gmi(self) -> bool:
        return self in (Method.ZAB, Method.ZA, Method.ZB)


# Fixed reporting order.
ALL_METHODS = (
    Method.ZAB,
    Method.ZA,
    Method.ZB,
    Method.PEARSON_OBSERVED,
    Method.PEARSON_THEORETICAL,
)


def decide(p_value: float, alpha: float) -> bool:
    """Reject when the p-value is strictly below the level."""
    return bool(p_value < alpha)


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    method: Method
    statistic: float
    p_value: float
    reject: bool
    alpha: float
    i_hat: int
    j_hat: int
    n: int
    lam: float | None = None
    sigma2_hat: float | None = None
    df: int | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject": self.reject,
            "alpha": self.alpha,
            "lambda": self.lam,
            "sigma2_hat": self.sigma2_hat,
            "df": self.df,
            "i_hat": self.i_hat,
            "j_hat": self.j_hat,
            "n": self.n,
            "warnings": list(self.warnings),
        }
