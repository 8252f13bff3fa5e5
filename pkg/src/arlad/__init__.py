"""Robust inference for AR models whose error scale drifts over time.

The package fits AR(p) models by weighted least absolute deviations,
estimates sampling covariances with a random-weighting bootstrap, checks
model adequacy through sign-based residual autocorrelations, and ships a
config-driven Monte-Carlo harness for the accompanying experiments.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .ar import (
    ARSpec,
    SeriesSample,
    build_design,
    is_stationary,
    ma_coefficients,
    residuals,
)
from .asymptotics import (
    STD_LAPLACE,
    STD_NORMAL,
    STD_T3,
    ErrorDist,
    GProfile,
    asy_cov_simplified,
    c_gw_factor,
    efficiency_constants,
    error_dist,
    f0_of,
    lambda_matrix,
    portmanteau_cov_iid,
    step_efficiency_constants,
)
from .bootstrap import (
    BootstrapCov,
    RWConfig,
    draw_rw_weights,
    rw_covariance_racf,
    rw_covariance_theta,
)
from .dgp import DGPSpec, draw_innovations, g_profile_eval, gen_garch_u, gen_sample
from .diagnostics import (
    SignACF,
    TestOutcome,
    chi2_quantile,
    chi2_sf,
    portmanteau_test,
    sign_acf,
    sign_acf_bootstrap,
    wald_test,
)
from .estimators import ESTIMATOR_KINDS, FitResult, fit, fit_bootstrap
from .l1 import (
    L1Problem,
    L1Solution,
    SolverOptions,
    solve_weighted_lad,
    weighted_median,
)
from .simharness import (
    ExperimentConfig,
    SimReport,
    load_config,
    parse_config,
    run_efficiency_curves,
    run_experiment,
)
from .weights import (
    GHat,
    KernelConfig,
    cv_score,
    estimate_g_hat,
    kernel_row,
    select_bandwidth,
)

__all__ = [name for name in dir() if not name.startswith("_")]
