"""AR(p) bookkeeping: lag designs, residuals, stationarity, MA expansion.

All design matrices use zero initial values: lags that reach before the
start of the sample are filled with zeros rather than trimming rows, so a
fit on n observations always uses n rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NonFiniteError, NotStationaryError

__all__ = [
    "ARSpec",
    "SeriesSample",
    "build_design",
    "residuals",
    "is_stationary",
    "companion_matrix",
    "ma_coefficients",
    "long_run_mean",
]


@dataclass(frozen=True)
class ARSpec:
    """AR(p) coefficient vector ``theta = (mu, phi_1, ..., phi_p)``."""

    p: int
    theta: np.ndarray

    def __post_init__(self) -> None:
        th = np.asarray(self.theta, dtype=np.float64).ravel()
        if th.shape[0] != self.p + 1:
            raise ValueError(f"theta must have length p+1={self.p + 1}")
        if not np.isfinite(th).all():
            raise NonFiniteError("theta contains NaN or infinite entries")
        object.__setattr__(self, "theta", th)

    @property
    def mu(self) -> float:
        return float(self.theta[0])

    @property
    def phi(self) -> np.ndarray:
        return self.theta[1:]


@dataclass
class SeriesSample:
    """An observed univariate series, optionally carrying simulation truth.

    ``true_g`` (the scale profile evaluated at t/n) and ``true_u`` (the
    rescaled errors) are populated by the simulation generators and are
    required by the infeasible estimators only.
    """

    y: np.ndarray
    true_g: np.ndarray | None = None
    true_u: np.ndarray | None = None

    def __post_init__(self) -> None:
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if not np.isfinite(y).all():
            raise NonFiniteError("series contains NaN or infinite entries")
        self.y = y
        for name in ("true_g", "true_u"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=np.float64).ravel()
                if val.shape[0] != y.shape[0]:
                    raise ValueError(f"{name} length mismatch")
                setattr(self, name, val)

    @property
    def n(self) -> int:
        return self.y.shape[0]


def _as_series(sample) -> np.ndarray:
    if isinstance(sample, SeriesSample):
        return sample.y
    return np.asarray(sample, dtype=np.float64).ravel()


def build_design(sample, p: int, *, intercept: bool = True):
    """Lag design for an AR(p) fit with zero initial values.

    Row t is ``(1, y_{t-1}, ..., y_{t-p})`` (the leading one dropped when
    ``intercept=False``); lags reaching before the sample start are zero.

    Returns
    -------
    (design, response)
        ``design`` has shape (n, p+1) or (n, p); ``response`` is y.
    """
    y = _as_series(sample)
    n = y.shape[0]
    if p < 0:
        raise ValueError("p must be >= 0")
    if p == 0 and not intercept:
        raise ValueError("p=0 without an intercept leaves no regressors")
    lagged = np.zeros((n, p))
    for j in range(1, p + 1):
        lagged[j:, j - 1] = y[: n - j]
    if intercept:
        design = np.column_stack([np.ones(n), lagged])
    else:
        design = lagged
    return np.ascontiguousarray(design), y.copy()


def residuals(sample, spec: ARSpec) -> np.ndarray:
    """Residuals ``y_t - theta' (1, y_{t-1}, ..., y_{t-p})``."""
    X, y = build_design(sample, spec.p, intercept=True)
    return y - X @ spec.theta


def companion_matrix(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=np.float64).ravel()
    p = phi.shape[0]
    C = np.zeros((p, p))
    C[0, :] = phi
    if p > 1:
        C[1:, :-1] = np.eye(p - 1)
    return C


def is_stationary(phi) -> bool:
    """True iff all companion-matrix eigenvalues have modulus < 1.

    Equivalent to every root of ``1 - sum_i phi_i z^i`` lying outside the
    unit circle.
    """
    phi = np.asarray(phi, dtype=np.float64).ravel()
    if not np.isfinite(phi).all():
        raise NonFiniteError("phi contains NaN or infinite entries")
    if phi.shape[0] == 0 or not phi.any():
        return True
    eig = np.linalg.eigvals(companion_matrix(phi))
    return bool(np.abs(eig).max() < 1.0)


def ma_coefficients(phi, K: int | None = None, *, tail_tol: float = 1e-10,
                    max_terms: int = 10_000) -> np.ndarray:
    """Moving-average coefficients of a stationary AR filter.

    ``alpha_0 = 1`` and ``alpha_i = sum_{j<=min(i,p)} phi_j alpha_{i-j}``.
    With ``K=None`` the truncation point is chosen so the geometric tail
    estimate falls below ``tail_tol`` (capped at ``max_terms`` terms).

    Returns coefficients ``alpha_0 .. alpha_K`` (length K+1).
    """
    phi = np.asarray(phi, dtype=np.float64).ravel()
    p = phi.shape[0]
    if not is_stationary(phi):
        raise NotStationaryError("phi violates the stationarity condition")
    if p == 0 or not phi.any():
        k_eff = 0 if K is None else int(K)
        out = np.zeros(k_eff + 1)
        out[0] = 1.0
        return out

    rho = float(np.abs(np.linalg.eigvals(companion_matrix(phi))).max())

    def tail_bound(alpha_tail: np.ndarray) -> float:
        # |alpha_i| ~ C rho^i for large i; bound the tail geometrically.
        return float(np.abs(alpha_tail).sum()) * rho / (1.0 - rho)

    if K is not None:
        k_eff = int(K)
    else:
        k_eff = max(p, 8)
        alpha = _ma_recursion(phi, k_eff)
        while tail_bound(alpha[-p:]) >= tail_tol and k_eff < max_terms:
            k_eff = min(2 * k_eff, max_terms)
            alpha = _ma_recursion(phi, k_eff)
        return alpha
    return _ma_recursion(phi, k_eff)


def _ma_recursion(phi: np.ndarray, K: int) -> np.ndarray:
    p = phi.shape[0]
    alpha = np.zeros(K + 1)
    alpha[0] = 1.0
    for i in range(1, K + 1):
        j = min(i, p)
        alpha[i] = phi[:j] @ alpha[i - j: i][::-1]
    return alpha


def long_run_mean(mu: float, phi) -> float:
    """Level ``mu / (1 - sum phi_i)`` of a stationary AR process."""
    phi = np.asarray(phi, dtype=np.float64).ravel()
    if not is_stationary(phi):
        raise NotStationaryError("phi violates the stationarity condition")
    return float(mu / (1.0 - phi.sum()))
