"""Sign-based residual autocorrelations and the two test statistics.

Residual signs use ``sgn(a) = 1{a>0} - 1{a<0}``, so exact zeros (the
interpolated rows of an L1 vertex) are neutral.  The portmanteau and Wald
statistics are quadratic forms in bootstrap covariance estimates and are
referred to upper chi-square tails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SingularMatrixError, ZeroDenominatorError
from .special import chi2_quantile, chi2_sf

__all__ = [
    "DEFAULT_LEVELS",
    "SignACF",
    "TestOutcome",
    "sign_acf",
    "sign_acf_bootstrap",
    "wald_test",
    "portmanteau_test",
    "chi2_sf",
    "chi2_quantile",
]

DEFAULT_LEVELS = (0.01, 0.05, 0.10)

_COND_LIMIT = 1e12


@dataclass
class SignACF:
    """Autocorrelations of the residual sign series at lags 1..M."""

    r: np.ndarray
    M: int
    n: int


@dataclass
class TestOutcome:
    """A chi-square referenced test statistic.

    ``p_value`` is the upper tail probability at the statistic;
    ``reject_at`` maps each requested level to ``p_value < level``.
    """

    statistic: float
    df: int
    p_value: float
    reject_at: dict[float, bool]


def _signs_and_deviations(residuals, M: int) -> tuple[np.ndarray, int]:
    resid = np.asarray(residuals, dtype=np.float64).ravel()
    n = resid.shape[0]
    if M < 1:
        raise ValueError("M must be >= 1")
    if n <= M:
        raise ValueError(f"need n > M, got n={n}, M={M}")
    s = np.sign(resid)
    d = s - s.mean()
    return d, n


def sign_acf(residuals, M: int) -> SignACF:
    """Sample autocorrelations of the residual signs at lags 1..M.

    The sign series is mean-corrected; raises when every sign is equal
    (zero denominator).
    """
    d, n = _signs_and_deviations(residuals, M)
    denom = float(d @ d)
    if denom <= 0.0:
        raise ZeroDenominatorError("all residual signs are equal")
    r = np.array([float(d[k:] @ d[:-k]) for k in range(1, M + 1)]) / denom
    return SignACF(r=r, M=M, n=n)


def sign_acf_bootstrap(residuals_star, rw_weights, M: int) -> SignACF:
    """Bootstrap sign autocorrelations with multiplier-weighted numerator.

    The multipliers enter the lagged products only; the normalizer is the
    plain sum of squared mean-corrected signs.  The residuals must come
    from the refit performed under the same multipliers.
    """
    d, n = _signs_and_deviations(residuals_star, M)
    m = np.asarray(rw_weights, dtype=np.float64).ravel()
    if m.shape[0] != n:
        raise ValueError(f"expected {n} multipliers, got {m.shape[0]}")
    denom = float(d @ d)
    if denom <= 0.0:
        raise ZeroDenominatorError("all residual signs are equal")
    wd = m * d
    r = np.array([float(wd[k:] @ d[:-k]) for k in range(1, M + 1)]) / denom
    return SignACF(r=r, M=M, n=n)


def _outcome(statistic: float, df: int, levels) -> TestOutcome:
    p = chi2_sf(statistic, df)
    return TestOutcome(
        statistic=float(statistic),
        df=int(df),
        p_value=float(p),
        reject_at={float(lv): bool(p < lv) for lv in levels},
    )


def wald_test(theta, V, Gamma, r, *, levels=DEFAULT_LEVELS) -> TestOutcome:
    """Quadratic-form test of the linear restriction ``Gamma theta = r``.

    The statistic is referred to a chi-square with as many degrees of
    freedom as restriction rows.
    """
    theta = np.asarray(theta, dtype=np.float64).ravel()
    V = np.atleast_2d(np.asarray(V, dtype=np.float64))
    Gamma = np.atleast_2d(np.asarray(Gamma, dtype=np.float64))
    rvec = np.atleast_1d(np.asarray(r, dtype=np.float64)).ravel()
    s, k = Gamma.shape
    if k != theta.shape[0] or V.shape != (k, k) or rvec.shape[0] != s:
        raise ValueError("shape mismatch among theta, V, Gamma, r")
    if np.linalg.matrix_rank(Gamma) < s:
        raise ValueError("constraint matrix must have full row rank")
    gap = Gamma @ theta - rvec
    core = Gamma @ V @ Gamma.T
    if np.linalg.cond(core) > _COND_LIMIT:
        raise SingularMatrixError("constraint covariance is numerically singular")
    stat = float(gap @ np.linalg.solve(core, gap))
    return _outcome(stat, s, levels)


def portmanteau_test(r: SignACF, U, *, levels=DEFAULT_LEVELS) -> TestOutcome:
    """Portmanteau statistic ``r' U^{-1} r`` against chi-square with M df."""
    U = np.atleast_2d(np.asarray(U, dtype=np.float64))
    if U.shape != (r.M, r.M):
        raise ValueError(f"U must be {r.M}x{r.M}")
    if np.linalg.cond(U) > _COND_LIMIT:
        raise SingularMatrixError("autocorrelation covariance is numerically singular")
    stat = float(r.r @ np.linalg.solve(U, r.r))
    return _outcome(stat, r.M, levels)
