"""Random-weighting bootstrap covariances.

Both procedures follow the same three steps: draw J replications of
i.i.d. standard-exponential multipliers (mean one, variance one), re-solve
the weighted L1 problem under each multiplier vector, and form the second
moment of the replicate statistic about its base-sample value.  The theta
variant aggregates refitted coefficient vectors; the sign-autocorrelation
variant aggregates the multiplier-weighted sign autocorrelations of the
refitted residuals, using the same multipliers in the refit and in the
numerator of the replicate statistic.

Replication streams are spawned from a single seed sequence, so results
are bit-identical for a fixed seed regardless of worker count; replicates
whose solve degenerates (flat face or rank failure) are dropped and
counted.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import sign_acf, sign_acf_bootstrap
from .estimators import FitResult, fit, fit_bootstrap
from .exceptions import TooFewReplicationsError, ZeroDenominatorError
from .l1 import STATUS_OPTIMAL

__all__ = [
    "RWConfig",
    "BootstrapCov",
    "draw_rw_weights",
    "rw_covariance_theta",
    "rw_covariance_racf",
]


@dataclass(frozen=True)
class RWConfig:
    """Replication count, seeding, and execution policy."""

    J: int = 500
    seed: int | np.random.SeedSequence = 0
    distribution: str = "std_exponential"
    mean_center: bool = False
    n_jobs: int = 1
    max_degenerate_fraction: float = 0.05

    def __post_init__(self) -> None:
        if self.J < 2:
            raise ValueError("J must be >= 2")
        if self.distribution != "std_exponential":
            raise ValueError(
                "only the standard exponential multiplier law is supported"
            )

    def seed_sequence(self) -> np.random.SeedSequence:
        if isinstance(self.seed, np.random.SeedSequence):
            return self.seed
        return np.random.SeedSequence(self.seed)


@dataclass
class BootstrapCov:
    """Second-moment matrix of replicate deviations from the base value."""

    matrix: np.ndarray
    J_effective: int
    n_dropped: int
    warning: str | None = None
    draws: np.ndarray | None = field(default=None, repr=False)

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.diag(self.matrix))


def draw_rw_weights(n: int, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. standard exponential multipliers (mean and variance one)."""
    return rng.standard_exponential(n)


def _map_indexed(fn, count: int, n_jobs: int) -> list:
    if n_jobs <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, range(count)))


def _aggregate(
    stats: np.ndarray,
    ok: np.ndarray,
    center: np.ndarray,
    cfg: RWConfig,
    keep_draws: bool,
) -> BootstrapCov:
    j_eff = int(ok.sum())
    n_drop = stats.shape[0] - j_eff
    if j_eff < 2:
        raise TooFewReplicationsError(
            f"only {j_eff} usable bootstrap replications out of {stats.shape[0]}"
        )
    diffs = stats[ok] - center
    if cfg.mean_center:
        diffs = diffs - diffs.mean(axis=0)
    cov = diffs.T @ diffs / j_eff
    cov = 0.5 * (cov + cov.T)
    warning = None
    if n_drop > cfg.max_degenerate_fraction * stats.shape[0]:
        warning = (
            f"{n_drop} of {stats.shape[0]} replications were degenerate and dropped"
        )
    return BootstrapCov(
        matrix=cov,
        J_effective=j_eff,
        n_dropped=n_drop,
        warning=warning,
        draws=stats if keep_draws else None,
    )


def rw_covariance_theta(
    sample,
    p: int,
    kind: str,
    cfg: RWConfig,
    *,
    base: FitResult | None = None,
    intercept: bool = True,
    keep_draws: bool = False,
    **fit_kwargs,
) -> BootstrapCov:
    """Bootstrap covariance of the fitted coefficient vector.

    The matrix estimates ``cov(theta_hat)`` directly (replicates live on
    the same scale as the estimate, so no sample-size factor is applied).
    """
    if base is None:
        base = fit(sample, p, kind, intercept=intercept, **fit_kwargs)
    children = cfg.seed_sequence().spawn(cfg.J)
    n = base.n
    k = base.theta.shape[0]

    def one(i: int):
        rng = np.random.default_rng(children[i])
        m = draw_rw_weights(n, rng)
        res = fit_bootstrap(sample, p, kind, m, base=base)
        if res.solver_status != STATUS_OPTIMAL:
            return None
        return res.theta

    rows = _map_indexed(one, cfg.J, cfg.n_jobs)
    stats = np.zeros((cfg.J, k))
    ok = np.zeros(cfg.J, dtype=bool)
    for i, row in enumerate(rows):
        if row is not None:
            stats[i] = row
            ok[i] = True
    return _aggregate(stats, ok, base.theta, cfg, keep_draws)


def rw_covariance_racf(
    sample,
    p: int,
    kind: str,
    M: int,
    cfg: RWConfig,
    *,
    base: FitResult | None = None,
    intercept: bool = True,
    keep_draws: bool = False,
    **fit_kwargs,
) -> BootstrapCov:
    """Bootstrap covariance of the residual-sign autocorrelation vector.

    Each replicate refits under its multipliers and evaluates the
    multiplier-weighted sign autocorrelation of the refit residuals; the
    covariance is taken about the base-fit autocorrelation.
    """
    if base is None:
        base = fit(sample, p, kind, intercept=intercept, **fit_kwargs)
    base_r = sign_acf(base.residuals, M).r
    children = cfg.seed_sequence().spawn(cfg.J)
    n = base.n

    def one(i: int):
        rng = np.random.default_rng(children[i])
        m = draw_rw_weights(n, rng)
        res = fit_bootstrap(sample, p, kind, m, base=base)
        if res.solver_status != STATUS_OPTIMAL:
            return None
        try:
            return sign_acf_bootstrap(res.residuals, m, M).r
        except ZeroDenominatorError:
            return None

    rows = _map_indexed(one, cfg.J, cfg.n_jobs)
    stats = np.zeros((cfg.J, M))
    ok = np.zeros(cfg.J, dtype=bool)
    for i, row in enumerate(rows):
        if row is not None:
            stats[i] = row
            ok[i] = True
    return _aggregate(stats, ok, base_r, cfg, keep_draws)
