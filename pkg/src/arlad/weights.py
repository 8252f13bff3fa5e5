"""Kernel estimation of the error-scale profile.

The profile value at index t is a leave-one-out kernel average of the
absolute residuals: row weights are ``K((t - i) / (n b))`` for i != t,
zero at i = t, normalized to sum to one.  The bandwidth is anchored at the
rate ``n^{-1/(5 + 2 delta4)}`` and the multiplier C is chosen by grid
search on the leave-one-out cross-validation score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import AllZeroResidualsError, DegenerateRowError, NonFiniteError

__all__ = [
    "KernelConfig",
    "GHat",
    "BandwidthChoice",
    "gaussian_kernel",
    "kernel_row",
    "estimate_g_hat",
    "cv_score",
    "bandwidth_anchor",
    "default_c_grid",
    "select_bandwidth",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def gaussian_kernel(x):
    """Standard normal density; integrates to one over the real line."""
    x = np.asarray(x, dtype=np.float64)
    return np.exp(-0.5 * x * x) / _SQRT_2PI


_KERNELS = {"gaussian": gaussian_kernel}


@dataclass(frozen=True)
class KernelConfig:
    """Kernel family, bandwidth b, and sample size for the row weights."""

    bandwidth: float
    n: int
    kernel: str = "gaussian"

    def __post_init__(self) -> None:
        if self.kernel not in _KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        if self.n < 2:
            raise ValueError("need at least two observations")

    @property
    def fn(self):
        return _KERNELS[self.kernel]


@dataclass
class GHat:
    """Estimated scale profile with a positivity floor.

    ``floor_applied`` flags the entries lifted to the floor; the raw
    kernel average is a convex combination of |residuals| and can reach
    zero only in pathological samples.
    """

    values: np.ndarray
    bandwidth_used: float
    floor_applied: np.ndarray
    floor_value: float


def kernel_row(t: int, cfg: KernelConfig) -> np.ndarray:
    """Leave-one-out weight row for index ``t`` (0-based).

    Nonnegative, zero at its own index, sums to one.
    """
    n = cfg.n
    if not 0 <= t < n:
        raise ValueError(f"t must lie in [0, {n - 1}]")
    dist = (t - np.arange(n)) / (n * cfg.bandwidth)
    row = cfg.fn(dist)
    row[t] = 0.0
    total = row.sum()
    if total <= 0.0:
        raise DegenerateRowError(f"kernel row {t} sums to zero")
    return row / total


def _loo_average(values: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    """Leave-one-out kernel average of ``values`` at every index.

    The kernel matrix is Toeplitz, so both the numerator and the
    normalizer are plain convolutions.
    """
    n = values.shape[0]
    kvec = cfg.fn(np.arange(-(n - 1), n) / (n * cfg.bandwidth))
    k0 = float(cfg.fn(np.zeros(1))[0])
    num = np.convolve(values, kvec)[n - 1: 2 * n - 1] - k0 * values
    den = np.convolve(np.ones(n), kvec)[n - 1: 2 * n - 1] - k0
    if (den <= 0.0).any():
        raise DegenerateRowError("a kernel row sums to zero at this bandwidth")
    return num / den


def estimate_g_hat(
    abs_residuals, cfg: KernelConfig, *, floor_scale: float = 1e-4
) -> GHat:
    """Kernel estimate of the scale profile from absolute residuals.

    The estimate enters weighted objectives as a divisor, so entries are
    floored at ``floor_scale * median(abs_residuals)``.
    """
    a = np.asarray(abs_residuals, dtype=np.float64).ravel()
    if not np.isfinite(a).all():
        raise NonFiniteError("absolute residuals contain NaN or infinite entries")
    if (a < 0).any():
        raise ValueError("absolute residuals must be nonnegative")
    if a.shape[0] != cfg.n:
        raise ValueError(f"expected {cfg.n} residuals, got {a.shape[0]}")
    if a.max() == 0.0:
        raise AllZeroResidualsError(
            "all residuals are zero; the scale profile is unidentifiable"
        )
    raw = _loo_average(a, cfg)
    floor = floor_scale * float(np.median(a))
    if floor <= 0.0:
        floor = floor_scale * float(a[a > 0].mean())
    flagged = raw < floor
    return GHat(
        values=np.maximum(raw, floor),
        bandwidth_used=cfg.bandwidth,
        floor_applied=flagged,
        floor_value=floor,
    )


def cv_score(abs_residuals, bandwidth: float, *, kernel: str = "gaussian") -> float:
    """Leave-one-out CV criterion ``mean((|resid| - ghat)^2)`` at ``bandwidth``."""
    a = np.asarray(abs_residuals, dtype=np.float64).ravel()
    cfg = KernelConfig(bandwidth=bandwidth, n=a.shape[0], kernel=kernel)
    ghat = estimate_g_hat(a, cfg)
    diff = a - ghat.values
    return float(diff @ diff) / a.shape[0]


def bandwidth_anchor(n: int, delta4: float = 0.25) -> float:
    """Rate anchor ``n^{-1/(5 + 2 delta4)}`` for the bandwidth grid."""
    if n < 2:
        raise ValueError("need at least two observations")
    if delta4 <= 0:
        raise ValueError("delta4 must be positive")
    return float(n) ** (-1.0 / (5.0 + 2.0 * delta4))


def default_c_grid(num: int = 20, lo: float = 0.1, hi: float = 3.0) -> np.ndarray:
    """Log-spaced multiplier grid for the bandwidth search."""
    return np.geomspace(lo, hi, num)


@dataclass
class BandwidthChoice:
    """Outcome of the CV grid search."""

    bandwidth: float
    c: float
    anchor: float
    c_grid: np.ndarray
    cv_scores: np.ndarray


def select_bandwidth(
    abs_residuals,
    *,
    c_grid=None,
    delta4: float = 0.25,
    kernel: str = "gaussian",
) -> BandwidthChoice:
    """Choose ``b = C * n^{-1/(5 + 2 delta4)}`` minimizing the CV score.

    Ties resolve to the smallest C (the grid is ascending and argmin
    returns the first minimizer).
    """
    a = np.asarray(abs_residuals, dtype=np.float64).ravel()
    grid = default_c_grid() if c_grid is None else np.sort(
        np.asarray(c_grid, dtype=np.float64).ravel()
    )
    if grid.size == 0:
        raise ValueError("bandwidth grid is empty")
    anchor = bandwidth_anchor(a.shape[0], delta4)
    scores = np.array([cv_score(a, c * anchor, kernel=kernel) for c in grid])
    best = int(np.argmin(scores))
    return BandwidthChoice(
        bandwidth=float(grid[best] * anchor),
        c=float(grid[best]),
        anchor=anchor,
        c_grid=grid,
        cv_scores=scores,
    )
