"""Test of independence for contingency tables via generalized (escort) mutual information."""

from .entropy import mutual_information, shannon_entropy, wilks_statistic
from .errors import (
    DegenerateInput,
    DegenerateVariance,
    DomainError,
    GmiTestError,
    InsufficientSupport,
    InternalError,
    InvalidDf,
    ParseError,
    ZeroCellInSupport,
    ZeroSample,
)
from .escort import EscortTable, inverse_escort, power_escort_table, power_escort_vector
from .gmi import (
    GmiDecomposition,
    VarianceEstimate,
    ZStatistics,
    gmi_decompose,
    gmi_test,
    grad_t_a,
    sigma2_of,
    z_statistics,
)
from .pearson import pearson_statistic, pearson_test
from .results import Method, TestResult
from .special import chisq_sf, normal_cdf, normal_quantile
from .tables import (
    CountsTable,
    ObservedDims,
    ProbTable,
    empirical,
    observed_dims,
    product_of_marginals,
    read_counts_csv,
    sample_multinomial,
    write_counts_csv,
)

__version__ = "0.1.0"
