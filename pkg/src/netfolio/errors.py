"""Exception hierarchy shared across the package."""


class NetfolioError(Exception):
    """Base class for all domain errors raised by this package."""


class DataError(NetfolioError):
    """Bad input data: unparseable files, too few assets, invalid prices."""


class DependenceError(NetfolioError):
    """A dependence matrix cannot be estimated from the given window."""


class QpError(NetfolioError):
    """The quadratic program is malformed (asymmetric or indefinite matrix)."""


class QpConvergenceError(QpError):
    """Solver exhausted its iteration budget before certifying KKT conditions.

    Carries the best iterate found so the caller can inspect how close it got.
    """

    def __init__(self, message, best_weights, kkt_residual, iterations):
        super().__init__(message)
        self.best_weights = best_weights
        self.kkt_residual = kkt_residual
        self.iterations = iterations


class BacktestError(NetfolioError):
    """A rolling-window run failed; the message names the offending window."""


class MetricsError(NetfolioError):
    """A performance statistic is undefined for the given series."""


class ConfigError(NetfolioError):
    """Invalid run configuration; the message names the offending field."""
