"""GNB-BE: the generalized negative binomial-beta exponential count
distribution, with numerically stable evaluation, exact-mixture sampling,
and maximum-likelihood fitting of grouped claim-count data."""

from .distributions import (
    BeParams,
    GnbBeParams,
    GnbParams,
    MomentExistenceError,
    QuadratureConfig,
    QuadratureConvergenceError,
    be_log_mgf,
    be_log_pdf,
    binbe_log_pmf,
    factorial_moment,
    gen_waring_log_pmf,
    gnb_log_pmf,
    gnbbe_log_pmf,
    gnbbe_pmf_oracle,
    gnbbe_pmf_oracle_many,
    index_of_dispersion,
    mean,
    moment_variance,
    nbbe_log_pmf,
    paper_variance,
    total_mass,
    waring_log_pmf,
    yule_log_pmf,
)
from .inference import (
    FitOptions,
    FitResult,
    FrequencyTable,
    ModelSpec,
    chi_square_gof,
    compare_models,
    expected_frequencies,
    fit,
    log_likelihood,
    nb_log_pmf,
    poisson_log_pmf,
)
from .sampling import RandomSource, SamplerExhaustedError, sample_be, sample_beta, sample_gnbbe
from .specfun import (
    DomainError,
    SignedLogValue,
    log_beta,
    log_binomial,
    log_gamma,
    signed_log_sum,
)

__version__ = "0.1.0"
