"""The six estimators: L1 fits with four weighting policies, plus the
least-squares comparators.

* ``lade`` -- unweighted L1 fit.
* ``weighted_lade`` -- L1 with a caller-supplied positive weight series.
* ``alade_infeasible`` -- L1 weighted by the true scale profile
  (simulation oracle; requires ``sample.true_g``).
* ``alade_feasible`` -- two-stage fit: unweighted L1, kernel estimate of
  the scale profile from the absolute residuals with a CV bandwidth, then
  the weighted L1 fit.
* ``lse`` / ``alse_infeasible`` -- least squares and its version with
  rows weighted by the inverse true profile (normal equations weighted by
  the squared inverse profile).

All designs use zero initial values.  Bootstrap refits re-solve the same
weighted problem under nonnegative multipliers, reusing the base fit's
estimated profile and bandwidth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ar import SeriesSample, build_design
from .exceptions import MissingTrueGError
from .l1 import (
    L1Solution,
    SolverOptions,
    _solve_core,
    solve_weighted_lad,
    L1Problem,
)
from .weights import BandwidthChoice, KernelConfig, estimate_g_hat, select_bandwidth

__all__ = [
    "ESTIMATOR_KINDS",
    "L1_KINDS",
    "LS_KINDS",
    "FitResult",
    "fit",
    "fit_bootstrap",
]

L1_KINDS = ("lade", "weighted_lade", "alade_infeasible", "alade_feasible")
LS_KINDS = ("lse", "alse_infeasible")
ESTIMATOR_KINDS = L1_KINDS + LS_KINDS


@dataclass
class FitResult:
    """A fitted model plus everything a bootstrap refit needs.

    ``weights_used`` is the positive per-observation weight series the
    absolute residuals were divided by (all ones for the unweighted
    kinds and for least squares); ``residuals`` are exactly zero at the
    interpolated rows of an L1 vertex.
    """

    kind: str
    p: int
    intercept: bool
    theta: np.ndarray
    residuals: np.ndarray
    weights_used: np.ndarray
    bandwidth: float | None = None
    bandwidth_choice: BandwidthChoice | None = field(default=None, repr=False)
    solver: L1Solution | None = field(default=None, repr=False)
    design: np.ndarray = field(default=None, repr=False)
    response: np.ndarray = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.response.shape[0]

    @property
    def inv_weights(self) -> np.ndarray:
        return 1.0 / self.weights_used

    @property
    def solver_status(self) -> str | None:
        return None if self.solver is None else self.solver.status


def _as_sample(sample) -> SeriesSample:
    if isinstance(sample, SeriesSample):
        return sample
    return SeriesSample(y=np.asarray(sample, dtype=np.float64))


def _l1_result(
    kind: str,
    p: int,
    intercept: bool,
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    sol: L1Solution,
    bandwidth: float | None = None,
    bandwidth_choice: BandwidthChoice | None = None,
) -> FitResult:
    resid = y - X @ sol.theta
    resid[sol.basis] = 0.0  # interpolated rows are exact zeros at a vertex
    return FitResult(
        kind=kind,
        p=p,
        intercept=intercept,
        theta=sol.theta,
        residuals=resid,
        weights_used=w,
        bandwidth=bandwidth,
        bandwidth_choice=bandwidth_choice,
        solver=sol,
        design=X,
        response=y,
    )


def fit(
    sample,
    p: int,
    kind: str,
    *,
    weights=None,
    intercept: bool = True,
    delta4: float = 0.25,
    c_grid=None,
    kernel: str = "gaussian",
    solver_options: SolverOptions | None = None,
) -> FitResult:
    """Fit an AR(p) model with the requested estimator.

    Parameters
    ----------
    sample : SeriesSample or array_like
        Observed series; infeasible kinds need ``sample.true_g``.
    p : int
        Lag order (0 allowed for the pure location model).
    kind : str
        One of ``ESTIMATOR_KINDS``.
    weights : array_like, optional
        Positive weight series, required by ``weighted_lade`` only.
    intercept : bool
        Include the constant regressor.  Simulation reproductions fit
        slope-only models with the intercept pinned to zero.
    delta4, c_grid, kernel
        Bandwidth-search policy for the feasible adaptive fit.
    """
    if kind not in ESTIMATOR_KINDS:
        raise ValueError(f"unknown estimator kind {kind!r}")
    smp = _as_sample(sample)
    X, y = build_design(smp, p, intercept=intercept)
    n, n_params = X.shape
    if n <= n_params:
        raise ValueError(
            f"n too small: need more than {n_params} observations, got {n}"
        )
    ones = np.ones(n)

    if kind in LS_KINDS:
        if kind == "alse_infeasible":
            g = _require_true_g(smp, kind)
            Xw = X / g[:, None]
            yw = y / g
        else:
            g = ones
            Xw, yw = X, y
        theta, *_ = np.linalg.lstsq(Xw, yw, rcond=None)
        return FitResult(
            kind=kind,
            p=p,
            intercept=intercept,
            theta=theta,
            residuals=y - X @ theta,
            weights_used=g.copy(),
            design=X,
            response=y,
        )

    if kind == "lade":
        w = ones
    elif kind == "weighted_lade":
        if weights is None:
            raise ValueError("weighted_lade requires a weight series")
        w = np.asarray(weights, dtype=np.float64).ravel()
        if w.shape[0] != n or (w <= 0).any():
            raise ValueError("weights must be positive and of length n")
    elif kind == "alade_infeasible":
        w = _require_true_g(smp, kind)
    else:  # alade_feasible
        stage1 = fit(
            smp, p, "lade", intercept=intercept, solver_options=solver_options
        )
        abs_resid = np.abs(stage1.residuals)
        if abs_resid.max() == 0.0:
            # Perfect first-stage fit: the scale is unidentifiable but any
            # positive weighting returns the same (zero-objective) optimum.
            return FitResult(
                kind=kind,
                p=p,
                intercept=intercept,
                theta=stage1.theta,
                residuals=stage1.residuals,
                weights_used=ones,
                solver=stage1.solver,
                design=stage1.design,
                response=stage1.response,
            )
        choice = select_bandwidth(
            abs_resid, c_grid=c_grid, delta4=delta4, kernel=kernel
        )
        ghat = estimate_g_hat(
            abs_resid, KernelConfig(bandwidth=choice.bandwidth, n=n, kernel=kernel)
        )
        problem = L1Problem(X, y, inv_weights=1.0 / ghat.values)
        sol = solve_weighted_lad(problem, solver_options)
        return _l1_result(
            kind, p, intercept, X, y, ghat.values, sol,
            bandwidth=choice.bandwidth, bandwidth_choice=choice,
        )

    problem = L1Problem(X, y, inv_weights=1.0 / w)
    sol = solve_weighted_lad(problem, solver_options)
    return _l1_result(kind, p, intercept, X, y, w.copy(), sol)


def fit_bootstrap(
    sample,
    p: int,
    kind: str,
    rw_weights,
    *,
    base: FitResult,
    solver_options: SolverOptions | None = None,
) -> FitResult:
    """Re-solve a fitted L1 problem under resampling multipliers.

    The weight series (and, for the feasible adaptive fit, the estimated
    profile and bandwidth) is taken from ``base`` rather than re-derived,
    and the solve warm-starts from the base vertex.
    """
    if kind not in L1_KINDS:
        raise ValueError(f"bootstrap refits are defined for L1 kinds, not {kind!r}")
    if base.kind != kind or base.p != p:
        raise ValueError("base fit does not match the requested refit")
    m = np.asarray(rw_weights, dtype=np.float64).ravel()
    n = base.n
    if m.shape[0] != n:
        raise ValueError(f"expected {n} multipliers, got {m.shape[0]}")
    if (m < 0).any() or not np.isfinite(m).all():
        raise ValueError("multipliers must be finite and nonnegative")
    opts = solver_options or SolverOptions()
    sol = _solve_core(
        base.design,
        base.response,
        m * base.inv_weights,
        opts,
        None if base.solver is None else base.solver.basis,
        rank_checked=True,
    )
    return _l1_result(
        kind, p, base.intercept, base.design, base.response,
        base.weights_used, sol,
        bandwidth=base.bandwidth, bandwidth_choice=base.bandwidth_choice,
    )


def _require_true_g(sample: SeriesSample, kind: str) -> np.ndarray:
    if sample.true_g is None:
        raise MissingTrueGError(f"{kind} requires sample.true_g")
    return sample.true_g
