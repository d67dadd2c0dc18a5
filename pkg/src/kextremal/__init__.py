"""The K-extremal copula: the common copula of the K largest limiting maxima."""

from .copula import (
    SupportFlag,
    bivariate_margin_cdf,
    copula_cdf,
    copula_density,
    mgev_cdf,
    mgev_pdf,
    r_chain,
    support_check,
)
from .convergence import (
    ConvergenceRow,
    EmpiricalCopula,
    ParentSpec,
    convergence_report,
    empirical_cdf_at,
    empirical_copula_build,
    order_stats_replicates,
)
from .dependence import (
    DependenceResult,
    kendall_mc,
    rank_corr_from_batch,
    spearman_exact,
    spearman_mc,
)
from .errors import DomainError, NumericFailure
from .gev import (
    GevParams,
    gev_cdf,
    gev_pdf,
    gev_quantile,
    lambda_deriv,
    lambda_fn,
    omega_support,
)
from .jpoly import j_eval, j_suffix_table
from .psi import PsiValue, psi, psi_deriv, psi_inv, t_of_u
from .sampler import (
    SampleBatch,
    conditional_cdf,
    conditional_quantile,
    sample_batch,
    sample_one,
)

__version__ = "0.1.0"
