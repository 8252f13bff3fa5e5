"""Weighted least-absolute-deviations solver.

Solves ``min_theta  sum_t  m_t * v_t * |y_t - x_t' theta|`` for a
full-column-rank design ``X`` with fixed positive inverse weights ``v_t``
and optional nonnegative multipliers ``m_t`` (used by the random-weighting
bootstrap).  The objective is convex and piecewise linear, so a global
minimum is attained at a vertex where ``k = n_params`` rows of the design
are interpolated exactly.

The solver is a specialized simplex on that vertex structure, in the
Barrodale-Roberts spirit: each pivot fixes all but one basis row, descends
along the corresponding edge, and the line search passes through as many
residual sign changes as keep the directional derivative negative (a
weighted-median step).  Every nonzero step strictly decreases the
objective; degenerate (zero-length) pivots fall back to Bland's rule, so
the iteration terminates.  A Huber-smoothed iteration with vertex
polishing backs up the simplex if the pivot budget is ever exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import NonFiniteError, RankDeficientError

__all__ = [
    "L1Problem",
    "L1Solution",
    "SolverOptions",
    "solve_weighted_lad",
    "weighted_median",
    "STATUS_OPTIMAL",
    "STATUS_DEGENERATE_TIE",
    "STATUS_MAX_ITER",
]

STATUS_OPTIMAL = "optimal"
STATUS_DEGENERATE_TIE = "degenerate_tie"
STATUS_MAX_ITER = "max_iter"

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and budgets for :func:`solve_weighted_lad`.

    Attributes
    ----------
    tol_obj : float
        Relative optimality tolerance on the subgradient check; implies
        the same relative accuracy on the objective at desk scale.
    rank_tol : float
        Relative threshold on the pivoted-QR diagonal below which the
        design is declared rank deficient.
    tie_tol : float
        Relative band around an exactly-binding subgradient inside which
        the optimum is flagged as a flat face (``degenerate_tie``).
    max_pivots_factor : int
        Pivot budget is ``max_pivots_factor * n`` before giving up with
        status ``max_iter``.
    """

    tol_obj: float = 1e-9
    rank_tol: float = 1e-10
    tie_tol: float = 1e-9
    max_pivots_factor: int = 50


@dataclass
class L1Problem:
    """One weighted LAD instance.

    ``inv_weights`` are the strictly positive multipliers applied to each
    absolute residual (an inverse scale); ``multipliers`` are optional
    nonnegative resampling weights, defaulting to one.
    """

    design: np.ndarray
    response: np.ndarray
    inv_weights: np.ndarray | None = None
    multipliers: np.ndarray | None = None

    def __post_init__(self) -> None:
        X = np.asarray(self.design, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.response, dtype=np.float64).ravel()
        n, k = X.shape
        if k == 0:
            raise ValueError("design has no columns")
        if y.shape[0] != n:
            raise ValueError(f"response length {y.shape[0]} != design rows {n}")
        if n < k:
            raise ValueError(f"need n >= n_params, got n={n}, n_params={k}")
        v = (
            np.ones(n)
            if self.inv_weights is None
            else np.asarray(self.inv_weights, dtype=np.float64).ravel()
        )
        m = (
            np.ones(n)
            if self.multipliers is None
            else np.asarray(self.multipliers, dtype=np.float64).ravel()
        )
        if v.shape[0] != n or m.shape[0] != n:
            raise ValueError("inv_weights/multipliers length mismatch")
        if not (
            np.isfinite(X).all()
            and np.isfinite(y).all()
            and np.isfinite(v).all()
            and np.isfinite(m).all()
        ):
            raise NonFiniteError("inputs contain NaN or infinite entries")
        if not (v > 0).all():
            raise ValueError("inv_weights must be strictly positive")
        if (m < 0).any():
            raise ValueError("multipliers must be nonnegative")
        self.design = np.ascontiguousarray(X)
        self.response = y
        self.inv_weights = v
        self.multipliers = m

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def n_params(self) -> int:
        return self.design.shape[1]

    def objective_at(self, theta: np.ndarray) -> float:
        """Evaluate ``sum_t m_t v_t |y_t - x_t' theta|``."""
        r = self.response - self.design @ np.asarray(theta, dtype=np.float64)
        return float(np.dot(self.multipliers * self.inv_weights, np.abs(r)))


@dataclass
class L1Solution:
    """Solver output: one optimal vertex of the LAD objective."""

    theta: np.ndarray
    objective: float
    iterations: int
    status: str
    basis: np.ndarray = field(repr=False)


def weighted_median(values, weights) -> float:
    """Weighted median: the minimizer of ``sum_i w_i |v_i - m|``.

    Returns the lower of the two medians when the minimizing set is an
    interval (even-tie case).  Weights must be strictly positive.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("weighted_median of empty input")
    if v.shape != w.shape:
        raise ValueError("values and weights must have equal length")
    if not (np.isfinite(v).all() and np.isfinite(w).all()):
        raise NonFiniteError("inputs contain NaN or infinite entries")
    if (w <= 0).any():
        raise ValueError("weights must be strictly positive")
    m, _, _ = _weighted_median_core(v, w)
    return m


def _weighted_median_core(v: np.ndarray, w: np.ndarray) -> tuple[float, bool, int]:
    """Lower weighted median allowing zero weights.

    Returns ``(median, tie, index)`` where ``index`` is the position of
    the chosen value in the input arrays and ``tie`` signals an exactly
    flat minimizing interval.
    """
    order = np.argsort(v, kind="stable")
    cw = np.cumsum(w[order])
    total = cw[-1]
    half = 0.5 * total
    pos = int(np.searchsorted(cw, half, side="left"))
    # Guard against accumulated rounding pushing the target past the end.
    pos = min(pos, cw.size - 1)
    tie = bool(abs(cw[pos] - half) <= 16 * _EPS * max(total, 1.0))
    idx = int(order[pos])
    return float(v[idx]), tie, idx


def _pivoted_row_qr(X: np.ndarray, rank_tol: float) -> np.ndarray:
    """Rank-check the design and return k independent row indices.

    Column-pivoted QR of ``X.T`` orders the rows of ``X`` by decreasing
    contribution to the column space; a collapsed diagonal of ``R``
    signals rank deficiency of the design.
    """
    n, k = X.shape
    _, R, jpvt = scipy.linalg.qr(X.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size < k or diag[0] == 0.0 or (diag <= rank_tol * diag[0]).any():
        raise RankDeficientError(
            f"design columns are linearly dependent beyond tolerance {rank_tol:g}"
        )
    return np.asarray(jpvt[:k], dtype=np.intp)


def _solve_k1(X: np.ndarray, y: np.ndarray, c: np.ndarray) -> L1Solution:
    """Single-parameter fast path: an exact weighted-median solve."""
    x = X[:, 0]
    active = (x != 0.0) & (c > 0.0)
    if not active.any():
        # All cost mass sits on rows the parameter cannot affect.
        pos = int(np.argmax(np.abs(x)))
        theta = np.array([y[pos] / x[pos]])
        return L1Solution(
            theta=theta,
            objective=float(c @ np.abs(y - x * theta[0])),
            iterations=0,
            status=STATUS_DEGENERATE_TIE,
            basis=np.array([pos], dtype=np.intp),
        )
    idx = np.flatnonzero(active)
    vals = y[idx] / x[idx]
    wts = c[idx] * np.abs(x[idx])
    m, tie, pos = _weighted_median_core(vals, wts)
    theta = np.array([m])
    basis = np.array([idx[pos]], dtype=np.intp)
    return L1Solution(
        theta=theta,
        objective=float(c @ np.abs(y - x * m)),
        iterations=1,
        status=STATUS_DEGENERATE_TIE if tie else STATUS_OPTIMAL,
        basis=basis,
    )


def _huber_fallback(
    X: np.ndarray, y: np.ndarray, c: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Smoothed-objective fallback: IRLS on a shrinking Huber width.

    Returns an approximate minimizer and a polished vertex basis for one
    final simplex verification pass.
    """
    n, k = X.shape
    theta, *_ = np.linalg.lstsq(X * np.sqrt(c)[:, None], y * np.sqrt(c), rcond=None)
    r = y - X @ theta
    delta = max(float(np.median(np.abs(r))), 1e-8)
    floor = 1e-12 * max(1.0, float(np.abs(y).max()))
    while delta > floor:
        for _ in range(20):
            wls = c / np.sqrt(r * r + delta * delta)
            Xw = X * wls[:, None]
            theta_new = np.linalg.solve(X.T @ Xw, Xw.T @ y)
            if np.abs(theta_new - theta).max() <= 1e-14 * (1 + np.abs(theta).max()):
                theta = theta_new
                break
            theta = theta_new
            r = y - X @ theta
        delta *= 0.1
    # Polish: pick k independent rows among the smallest residuals.
    order = np.argsort(np.abs(y - X @ theta), kind="stable")
    basis: list[int] = []
    for t in order:
        trial = basis + [int(t)]
        sub = X[trial]
        if np.linalg.matrix_rank(sub) == len(trial):
            basis = trial
        if len(basis) == k:
            break
    return theta, np.asarray(basis, dtype=np.intp)


def solve_weighted_lad(
    problem: L1Problem,
    opts: SolverOptions | None = None,
    initial_basis=None,
) -> L1Solution:
    """Minimize the weighted LAD objective exactly.

    Parameters
    ----------
    problem : L1Problem
        Validated instance; the design must have full column rank.
    opts : SolverOptions, optional
        Tolerances and pivot budget.
    initial_basis : array_like of int, optional
        Warm-start vertex (row indices).  Invalid bases silently fall
        back to a pivoted-QR start; bootstrap refits of the same design
        converge in a handful of pivots from the base-fit basis.

    Returns
    -------
    L1Solution
        One optimal vertex.  ``status`` is ``degenerate_tie`` when the
        optimum is a flat face, of which the returned vertex is one end.
    """
    if opts is None:
        opts = SolverOptions()
    X, y = problem.design, problem.response
    c = problem.multipliers * problem.inv_weights
    return _solve_core(X, y, c, opts, initial_basis, rank_checked=False)


def _solve_core(
    X: np.ndarray,
    y: np.ndarray,
    c: np.ndarray,
    opts: SolverOptions,
    initial_basis,
    rank_checked: bool,
) -> L1Solution:
    """Simplex core on pre-validated arrays.

    ``rank_checked=True`` (bootstrap refits of an already-solved design)
    skips the pivoted-QR rank check on the cold path; the check still runs
    lazily if a fallback start is ever required.
    """
    n, k = X.shape

    if k == 1:
        if not rank_checked and not np.any(X[:, 0] != 0.0):
            raise RankDeficientError("design column is identically zero")
        return _solve_k1(X, y, c)

    qr_basis: np.ndarray | None = None

    def fallback_basis() -> np.ndarray:
        nonlocal qr_basis
        if qr_basis is None:
            qr_basis = _pivoted_row_qr(X, opts.rank_tol)
        return qr_basis

    basis = None
    if initial_basis is not None:
        cand = np.asarray(initial_basis, dtype=np.intp).ravel()
        if (
            cand.size == k
            and np.unique(cand).size == k
            and cand.min() >= 0
            and cand.max() < n
        ):
            basis = cand.copy()
    if basis is None or not rank_checked:
        fallback_basis()
    if basis is None:
        basis = fallback_basis().copy()

    if c.max() == 0.0:
        # Zero total weight: objective identically zero, any vertex optimal.
        b = fallback_basis()
        theta = np.linalg.solve(X[b], y[b])
        return L1Solution(theta, 0.0, 0, STATUS_DEGENERATE_TIE, b.copy())

    max_pivots = opts.max_pivots_factor * n
    max_degenerate = 5 * n
    y_scale = max(1.0, float(np.abs(y).max()))
    iterations = 0
    degenerate_steps = 0
    status = STATUS_MAX_ITER
    theta = np.zeros(k)

    while iterations <= max_pivots:
        XB = X[basis]
        try:
            XB_inv = np.linalg.inv(XB)
        except np.linalg.LinAlgError:
            basis = fallback_basis().copy()
            XB_inv = np.linalg.inv(X[basis])
        theta = XB_inv @ y[basis]
        yhat = X @ theta
        r = y - yhat
        r[basis] = 0.0
        zero_thr = 1e4 * _EPS * max(y_scale, float(np.abs(yhat).max()))
        zero_mask = np.abs(r) <= zero_thr
        s = np.sign(r)
        s[zero_mask] = 0.0

        A = X @ XB_inv  # edge directions: column j moves only basis row j
        G = A.T @ (c * s)
        cB = c[basis]
        viol = np.abs(G) - cB
        opt_scale = 1.0 + float(np.abs(G).max()) + float(cB.max())
        opt_tol = opts.tol_obj * opt_scale

        jmax = int(np.argmax(viol))
        if viol[jmax] <= opt_tol:
            status = (
                STATUS_DEGENERATE_TIE
                if viol[jmax] >= -opts.tie_tol * opt_scale
                else STATUS_OPTIMAL
            )
            break

        nonbasis_zero = zero_mask.copy()
        nonbasis_zero[basis] = False
        any_nbz = bool(nonbasis_zero.any())

        moved = False
        for j in np.argsort(viol)[::-1]:
            if viol[j] <= opt_tol:
                break
            sigma = 1.0 if G[j] > 0 else -1.0
            w = sigma * A[:, j]
            zerosum = (
                float(c[nonbasis_zero] @ np.abs(w[nonbasis_zero])) if any_nbz else 0.0
            )
            d0 = cB[j] - abs(G[j]) + zerosum
            if d0 >= -opt_tol:
                continue  # ray blocked by interpolated rows; try next direction
            cand = np.flatnonzero((~zero_mask) & (w != 0.0))
            alpha = r[cand] / w[cand]
            keep = alpha > 0.0
            cand = cand[keep]
            alpha = alpha[keep]
            if cand.size == 0:
                continue
            order = np.argsort(alpha, kind="stable")
            gains = 2.0 * c[cand[order]] * np.abs(w[cand[order]])
            cum = d0 + np.cumsum(gains)
            hit = np.flatnonzero(cum >= 0.0)
            if hit.size == 0:
                continue
            basis[j] = cand[order[hit[0]]]
            moved = True
            break

        if moved:
            iterations += 1
            continue

        # No strictly descending edge although the plain subgradient check
        # failed: degenerate vertex.  Bland's rule -- swap the smallest
        # eligible interpolated row into the basis position with the
        # smallest row index among violated directions.
        pivoted = False
        if any_nbz:
            strict = np.flatnonzero(viol > opt_tol)
            for j in strict[np.argsort(basis[strict], kind="stable")]:
                col = np.abs(A[:, j])
                eligible = np.flatnonzero(nonbasis_zero & (col > 1e-9 * (1.0 + col.max())))
                if eligible.size:
                    basis[j] = eligible.min()
                    pivoted = True
                    break
        if not pivoted:
            # Every violated direction is blocked and no interpolated row can
            # pivot in: the vertex is optimal on a flat face.
            status = STATUS_DEGENERATE_TIE
            break
        iterations += 1
        degenerate_steps += 1
        if degenerate_steps > max_degenerate:
            status = STATUS_MAX_ITER
            break

    def objective_at(th: np.ndarray) -> float:
        return float(c @ np.abs(y - X @ th))

    if status == STATUS_MAX_ITER:
        # Pivot budget exhausted (cycling-safe but bounded): smooth, polish,
        # and keep the better vertex.
        theta_h, basis_h = _huber_fallback(X, y, c)
        if basis_h.size == k:
            theta_hv = np.linalg.solve(X[basis_h], y[basis_h])
            if objective_at(theta_hv) < objective_at(theta):
                theta, basis = theta_hv, basis_h

    return L1Solution(
        theta=theta,
        objective=objective_at(theta),
        iterations=iterations,
        status=status,
        basis=np.sort(np.asarray(basis, dtype=np.intp)),
    )
