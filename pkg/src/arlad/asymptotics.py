"""Closed-form efficiency machinery used as analytic oracles.

For a scale profile g on [0, 1], a weight profile w, and an i.i.d.
unit-variance error law with density f, the estimators compared here have
slope-block asymptotic covariances proportional to ``Lambda^{-1}``:

* unweighted L1 fit:      b1 = (1/(4 f(0)^2)) * int g^2 / (int g)^2
* scale-weighted L1 fit:  b2 = 1/(4 f(0)^2)
* least squares:          b3 = int g^4 / (int g^2)^2
* scale-weighted LS:      b4 = 1

More generally the weighted L1 fit carries the factor
``c_gw = (int (g/w)^2) / (int g/w)^2``, equal to one at w = g, and the
sign-autocorrelation vector of a correctly specified fit has asymptotic
covariance ``I_M - (2 - c_gw) * Kddot' Lambda^{-1} Kddot`` where Kddot
collects E|u|-scaled MA coefficients.  These formulas hold only for
i.i.d. u with zero intercept; they are estimated by bootstrap otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ar import ma_coefficients
from .quadrature import adaptive_simpson

__all__ = [
    "GProfile",
    "ErrorDist",
    "STD_NORMAL",
    "STD_LAPLACE",
    "STD_T3",
    "error_dist",
    "f0_of",
    "EfficiencyConstants",
    "efficiency_constants",
    "step_efficiency_constants",
    "c_gw_factor",
    "lambda_matrix",
    "asy_cov_simplified",
    "portmanteau_cov_iid",
]


@dataclass(frozen=True)
class GProfile:
    """A positive bounded scale profile on [0, 1].

    ``fn`` must accept numpy arrays.  ``discontinuities`` lists interior
    jump points so quadrature can split there.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    discontinuities: tuple[float, ...] = ()
    label: str = "custom"

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=np.float64))

    @staticmethod
    def constant(level: float = 1.0) -> "GProfile":
        if level <= 0:
            raise ValueError("profile must be positive")
        return GProfile(lambda x: np.full_like(x, float(level), dtype=np.float64),
                        (), f"constant({level:g})")

    @staticmethod
    def step(e0: float, e1: float, tau: float) -> "GProfile":
        """``e0`` before ``tau``, ``e1`` from ``tau`` on (inclusive)."""
        if e0 <= 0 or e1 <= 0:
            raise ValueError("step levels must be positive")
        if not 0.0 <= tau <= 1.0:
            raise ValueError("tau must lie in [0, 1]")
        disc = (tau,) if 0.0 < tau < 1.0 else ()
        return GProfile(
            lambda x: np.where(x >= tau, float(e1), float(e0)),
            disc,
            f"step({e0:g},{e1:g},{tau:g})",
        )

    @staticmethod
    def abrupt(delta: float) -> "GProfile":
        """Level 1 on [0, 0.5), level ``delta`` on [0.5, 1]."""
        return GProfile.step(1.0, delta, 0.5)

    @staticmethod
    def gradual(delta: float) -> "GProfile":
        """``1 + (delta - 1) x^2``."""
        if delta <= 0:
            raise ValueError("delta must be positive")
        d = float(delta)
        return GProfile(lambda x: 1.0 + (d - 1.0) * x * x, (), f"gradual({delta:g})")

    @staticmethod
    def periodic(delta: float) -> "GProfile":
        """``sin(delta x) + 2``."""
        d = float(delta)
        prof = GProfile(lambda x: np.sin(d * x) + 2.0, (), f"periodic({delta:g})")
        lo = prof(np.linspace(0.0, 1.0, 2001)).min()
        if lo <= 0:
            raise ValueError("periodic profile is not positive on [0, 1]")
        return prof


@dataclass(frozen=True)
class ErrorDist:
    """A unit-variance, median-zero error law.

    Attributes
    ----------
    f0 : density at zero of the standardized law.
    e_abs : first absolute moment E|u|.
    e_sq : second moment, one by construction.
    """

    kind: str
    f0: float
    e_abs: float
    e_sq: float = 1.0


# Laplace(0, b) with 2 b^2 = 1; Student t3 scaled by 1/sqrt(3).
STD_NORMAL = ErrorDist("std_normal", 1.0 / math.sqrt(2.0 * math.pi),
                       math.sqrt(2.0 / math.pi))
STD_LAPLACE = ErrorDist("std_laplace", 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0))
STD_T3 = ErrorDist("std_t3", 2.0 / math.pi, 2.0 / math.pi)

_DISTS = {d.kind: d for d in (STD_NORMAL, STD_LAPLACE, STD_T3)}


def error_dist(kind: str) -> ErrorDist:
    """Look up a supported error law by name."""
    try:
        return _DISTS[kind]
    except KeyError:
        raise ValueError(
            f"unknown error distribution {kind!r}; expected one of {sorted(_DISTS)}"
        ) from None


def f0_of(dist: ErrorDist | str) -> float:
    """Density at zero of the standardized error law."""
    if isinstance(dist, str):
        dist = error_dist(dist)
    return dist.f0


def _profile_integral(fn, *profiles: GProfile) -> float:
    points: set[float] = set()
    for prof in profiles:
        points.update(prof.discontinuities)
    value = adaptive_simpson(fn, 0.0, 1.0, rel_tol=1e-10, points=sorted(points))
    return float(value)


def _moment(g: GProfile, power: int) -> float:
    return _profile_integral(lambda x: float(g(x)) ** power, g)


@dataclass(frozen=True)
class EfficiencyConstants:
    b1: float
    b2: float
    b3: float
    b4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.b1, self.b2, self.b3, self.b4)


def efficiency_constants(g: GProfile, dist: ErrorDist | str) -> EfficiencyConstants:
    """Asymptotic variance factors (b1, b2, b3, b4) by quadrature."""
    if isinstance(dist, str):
        dist = error_dist(dist)
    i1 = _moment(g, 1)
    i2 = _moment(g, 2)
    i4 = _moment(g, 4)
    if min(i1, i2) <= 0:
        raise ValueError("profile must be positive on [0, 1]")
    b2 = 1.0 / (4.0 * dist.f0**2)
    return EfficiencyConstants(
        b1=b2 * i2 / i1**2,
        b2=b2,
        b3=i4 / i2**2,
        b4=1.0,
    )


def step_efficiency_constants(
    tau: float, delta: float, dist: ErrorDist | str
) -> EfficiencyConstants:
    """Closed forms of the b-constants for the unit step profile.

    For g = 1 before ``tau`` and ``delta`` after,
    ``int g^m = tau + (1 - tau) delta^m``.
    """
    if isinstance(dist, str):
        dist = error_dist(dist)
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    if delta <= 0:
        raise ValueError("delta must be positive")

    def im(m: int) -> float:
        return tau + (1.0 - tau) * delta**m

    b2 = 1.0 / (4.0 * dist.f0**2)
    return EfficiencyConstants(
        b1=b2 * im(2) / im(1) ** 2,
        b2=b2,
        b3=im(4) / im(2) ** 2,
        b4=1.0,
    )


def c_gw_factor(g: GProfile, w: GProfile) -> float:
    """``(int (g/w)^2) / (int g/w)^2``; equals 1 when w is proportional to g.

    By Cauchy-Schwarz the factor is >= 1 whenever w is constant.
    """
    num = _profile_integral(lambda x: (float(g(x)) / float(w(x))) ** 2, g, w)
    den = _profile_integral(lambda x: float(g(x)) / float(w(x)), g, w)
    if den <= 0:
        raise ValueError("profiles must be positive on [0, 1]")
    return num / den**2


def lambda_matrix(phi, *, tail_tol: float = 1e-10) -> np.ndarray:
    """p x p matrix with (r, s) entry ``sum_i alpha_i alpha_{i+|r-s|}``.

    Valid for i.i.d. unit-variance errors; the MA coefficients are
    truncated so the neglected tail is below ``tail_tol``.
    """
    phi = np.asarray(phi, dtype=np.float64).ravel()
    p = phi.shape[0]
    if p == 0:
        raise ValueError("lambda_matrix requires at least one lag")
    alpha = ma_coefficients(phi, tail_tol=tail_tol)
    lam = np.array([alpha[: alpha.size - k] @ alpha[k:] for k in range(p)])
    idx = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    return lam[idx]


def asy_cov_simplified(
    g: GProfile,
    w: GProfile,
    dist: ErrorDist | str,
    phi,
    *,
    assume_iid_zero_intercept: bool = True,
) -> np.ndarray:
    """Slope-block asymptotic covariance ``c_gw / (4 f(0)^2) * Lambda^{-1}``.

    Only the i.i.d., zero-intercept specialization is implemented; the
    caller attests to it via ``assume_iid_zero_intercept``.
    """
    if not assume_iid_zero_intercept:
        raise ValueError(
            "only the i.i.d. zero-intercept specialization is available; "
            "use the bootstrap covariance otherwise"
        )
    if isinstance(dist, str):
        dist = error_dist(dist)
    c = c_gw_factor(g, w)
    lam_inv = np.linalg.inv(lambda_matrix(phi))
    return (c / (4.0 * dist.f0**2)) * lam_inv


def portmanteau_cov_iid(
    g: GProfile,
    w: GProfile,
    dist: ErrorDist | str,
    phi,
    M: int,
    *,
    assume_iid_zero_intercept: bool = True,
) -> np.ndarray:
    """Asymptotic covariance of the scaled sign autocorrelations.

    ``I_M - (2 - c_gw) Kddot' Lambda^{-1} Kddot`` with
    ``Kddot[r-1, k-1] = E|u| alpha_{k-r}`` for k >= r (zero otherwise),
    for a correctly specified AR(p) fit with i.i.d. errors and zero
    intercept.  Positive semidefinite by construction at ``c_gw <= 2``.
    """
    if not assume_iid_zero_intercept:
        raise ValueError(
            "only the i.i.d. zero-intercept specialization is available; "
            "use the bootstrap covariance otherwise"
        )
    if isinstance(dist, str):
        dist = error_dist(dist)
    if M < 1:
        raise ValueError("M must be >= 1")
    phi = np.asarray(phi, dtype=np.float64).ravel()
    p = phi.shape[0]
    eye = np.eye(M)
    if p == 0:
        return eye
    alpha = ma_coefficients(phi)
    kddot = np.zeros((p, M))
    for r in range(1, p + 1):
        for k in range(r, M + 1):
            lag = k - r
            if lag < alpha.size:
                kddot[r - 1, k - 1] = dist.e_abs * alpha[lag]
    c = c_gw_factor(g, w)
    correction = (2.0 - c) * kddot.T @ np.linalg.solve(lambda_matrix(phi), kddot)
    out = eye - correction
    return 0.5 * (out + out.T)
