"""Exception types shared across the package."""

from __future__ import annotations


class ArladError(Exception):
    """Base class for all arlad errors."""


class NonFiniteError(ArladError):
    """An input contains NaN or infinite entries."""


class RankDeficientError(ArladError):
    """Design matrix columns are linearly dependent beyond tolerance."""


class NotStationaryError(ArladError):
    """AR coefficients violate the stationarity condition."""


class MissingTrueGError(ArladError):
    """An infeasible estimator was requested without the true scale profile."""


class AllZeroResidualsError(ArladError):
    """Residuals are identically zero; the scale profile is unidentifiable."""


class DegenerateRowError(ArladError):
    """A kernel weight row sums to zero and cannot be normalized."""


class ZeroDenominatorError(ArladError):
    """All residual signs are equal; the sign autocorrelation is undefined."""


class TooFewReplicationsError(ArladError):
    """Fewer than two usable bootstrap replications survived."""


class SingularMatrixError(ArladError):
    """A covariance matrix required by a test statistic is not invertible."""


class ConfigError(ArladError):
    """An experiment configuration is malformed."""
