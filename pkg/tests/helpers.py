"""Shared test oracles, independent of the library's solution paths."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np


def lad_oracle_objective(X, y, c) -> float:
    """Global LAD minimum by exhaustive exact-fit vertex enumeration.

    A minimizer of a convex piecewise-linear objective with a
    full-column-rank design lies at a vertex interpolating k rows, so
    enumerating every nonsingular k-subset and comparing objectives is
    exact (up to floating arithmetic).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    n, k = X.shape
    rows = np.array(list(combinations(range(n), k)))
    subs = X[rows]                       # (m, k, k)
    dets = np.linalg.det(subs)
    keep = np.abs(dets) > 1e-12 * max(1.0, np.abs(X).max()) ** k
    if not keep.any():
        raise ValueError("no nonsingular vertex")
    thetas = np.linalg.solve(subs[keep], y[rows[keep]])
    resid = y[None, :] - thetas @ X.T    # (m_keep, n)
    objs = np.abs(resid) @ c
    return float(objs.min())


def lad_breakpoint_median(values, weights) -> float:
    """Weighted median by direct objective comparison over breakpoints."""
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    objs = [(np.abs(values - v) @ weights, v) for v in np.sort(values)]
    best = min(o for o, _ in objs)
    cands = [v for o, v in objs if o <= best * (1 + 1e-12) + 1e-300]
    return min(cands)


def rational_sign_acf(signs, M: int) -> list[Fraction]:
    """Exact sign autocorrelations over the integers via fractions."""
    s = [int(v) for v in signs]
    n = len(s)
    sbar = Fraction(sum(s), n)
    d = [Fraction(v) - sbar for v in s]
    denom = sum(v * v for v in d)
    out = []
    for k in range(1, M + 1):
        num = sum(d[t] * d[t - k] for t in range(k, n))
        out.append(num / denom)
    return out


def random_lad_instance(rng: np.random.Generator, trial: int):
    """A random weighted LAD instance at the acceptance criterion's scale.

    Mixes intercept and slope-only designs, exponential multipliers with
    occasional exact zeros, and occasional exact-fit or rounded (tie-prone)
    responses.
    """
    n = int(rng.integers(4, 31))
    p = int(rng.integers(0, 3))
    cols = [np.ones(n)] + [rng.standard_normal(n) for _ in range(p)]
    X = np.column_stack(cols)
    if trial % 5 == 0 and p >= 1:
        X = X[:, 1:]
    k = X.shape[1]
    y = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
    if trial % 11 == 0:
        y = X @ rng.standard_normal(k)
    if trial % 13 == 0:
        y = np.round(y)
    v = rng.uniform(0.2, 3.0, n)
    m = rng.standard_exponential(n)
    if trial % 7 == 0:
        m[rng.integers(0, n, size=max(1, n // 5))] = 0.0
    return X, y, v, m
