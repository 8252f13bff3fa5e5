"""Simulation generators for the Monte-Carlo experiments.

A sample of length n follows the AR recursion with zero initial values
and errors ``eps_t = g(t/n) u_t``, where u is either the raw innovation
or a GARCH(1,1) rescaling ``u_t = eta_t sigma_t`` with
``sigma_t^2 = 0.1 + alpha u_{t-1}^2 + beta sigma_{t-1}^2`` seeded at its
stationary mean, with a burn-in discarded.  The generated sample carries
the true profile ``g(t/n)`` and the true ``u`` so infeasible estimators
have their oracle weights available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal

from .ar import SeriesSample, is_stationary
from .asymptotics import ErrorDist, GProfile, error_dist
from .exceptions import NotStationaryError

__all__ = [
    "GARCH_OMEGA",
    "DGPSpec",
    "draw_innovations",
    "gen_garch_u",
    "g_profile_eval",
    "gen_sample",
    "gen_sample_from_u",
]

GARCH_OMEGA = 0.1


@dataclass(frozen=True)
class DGPSpec:
    """One data-generating process.

    ``ar`` holds the slope coefficients (the intercept is fixed at zero);
    ``garch=None`` uses the raw unit-variance innovations for u, while a
    ``(alpha, beta)`` pair switches on the GARCH(1,1) rescaling with
    intercept ``GARCH_OMEGA``.
    """

    ar: tuple[float, ...]
    g: GProfile
    innovation: ErrorDist
    n: int
    garch: tuple[float, float] | None = None
    burn_in: int = 500

    def __post_init__(self) -> None:
        object.__setattr__(self, "ar", tuple(float(a) for a in self.ar))
        if isinstance(self.innovation, str):
            object.__setattr__(self, "innovation", error_dist(self.innovation))
        if not is_stationary(np.asarray(self.ar)):
            raise NotStationaryError(f"ar={self.ar} violates stationarity")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.garch is not None:
            a, b = (float(v) for v in self.garch)
            if a < 0 or b < 0:
                raise ValueError("GARCH coefficients must be nonnegative")
            if a + b >= 1:
                raise NotStationaryError(f"GARCH pair ({a}, {b}) is nonstationary")
            object.__setattr__(self, "garch", (a, b))


def draw_innovations(dist: ErrorDist | str, size: int, rng: np.random.Generator):
    """Unit-variance, median-zero innovation draws."""
    if isinstance(dist, str):
        dist = error_dist(dist)
    if dist.kind == "std_normal":
        return rng.standard_normal(size)
    if dist.kind == "std_laplace":
        return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size)
    if dist.kind == "std_t3":
        return rng.standard_t(3, size) / math.sqrt(3.0)
    raise ValueError(f"unknown innovation law {dist.kind!r}")


def gen_garch_u(
    n: int,
    burn_in: int,
    alpha: float,
    beta: float,
    dist: ErrorDist | str,
    rng: np.random.Generator,
) -> np.ndarray:
    """GARCH(1,1) rescaled errors, burn-in discarded.

    The variance recursion starts at its stationary mean
    ``omega / (1 - alpha - beta)``, so the kept stretch is effectively a
    draw from the stationary law.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("GARCH coefficients must be nonnegative")
    if alpha + beta >= 1:
        raise NotStationaryError(f"GARCH pair ({alpha}, {beta}) is nonstationary")
    total = n + burn_in
    eta = draw_innovations(dist, total, rng)
    u = np.empty(total)
    sig2 = GARCH_OMEGA / (1.0 - alpha - beta)
    for t in range(total):
        u[t] = eta[t] * math.sqrt(sig2)
        sig2 = GARCH_OMEGA + alpha * u[t] * u[t] + beta * sig2
    return u[burn_in:]


def g_profile_eval(profile: GProfile, x) -> np.ndarray:
    """Evaluate a scale profile at points of [0, 1]."""
    x = np.asarray(x, dtype=np.float64)
    if (x < 0).any() or (x > 1).any():
        raise ValueError("profile points must lie in [0, 1]")
    return np.asarray(profile(x), dtype=np.float64)


def gen_sample_from_u(spec: DGPSpec, u) -> SeriesSample:
    """Deterministic core: build the sample from given rescaled errors."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != spec.n:
        raise ValueError(f"expected {spec.n} errors, got {u.shape[0]}")
    tt = np.arange(1, spec.n + 1) / spec.n
    g_vals = g_profile_eval(spec.g, tt)
    eps = g_vals * u
    # y_t = sum_i phi_i y_{t-i} + eps_t with zero initial values is exactly
    # the IIR filter 1 / (1 - phi_1 L - ... - phi_p L^p) applied to eps.
    a_coefs = np.concatenate([[1.0], -np.asarray(spec.ar)])
    y = scipy.signal.lfilter([1.0], a_coefs, eps)
    return SeriesSample(y=y, true_g=g_vals, true_u=u)


def gen_sample(spec: DGPSpec, rng: np.random.Generator) -> SeriesSample:
    """Draw one sample from the process."""
    if spec.garch is None:
        u = draw_innovations(spec.innovation, spec.n, rng)
    else:
        alpha, beta = spec.garch
        u = gen_garch_u(spec.n, spec.burn_in, alpha, beta, spec.innovation, rng)
    return gen_sample_from_u(spec, u)
