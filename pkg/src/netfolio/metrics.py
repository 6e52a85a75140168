"""Risk-adjusted performance statistics for out-of-sample return series.

Conventions (disclosed in every emitted report): the annualized mean
scales the daily mean by the annualization factor and the annualized
standard deviation by its square root; variance uses the sample (1/(T-1))
normalization while skewness and kurtosis use population (1/T) moments;
kurtosis is raw, not excess. The Sharpe ratio is suppressed when the mean
excess return is not positive; the information ratio uses the population
standard deviation of the active return and is suppressed when that
standard deviation is zero.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .backtest import BacktestReport
from .errors import MetricsError

logger = logging.getLogger(__name__)

CONVENTIONS = (
    "mean annualized by the factor, stdev by its square root; "
    "variance sample (1/(T-1)); skewness/kurtosis population (1/T); "
    "kurtosis raw (non-excess); Sharpe omitted unless mean excess > 0; "
    "information ratio uses population tracking error vs the benchmark"
)


@dataclass(frozen=True)
class PerformanceSummary:
    strategy: str
    mean_annual: float
    stdev_annual: float
    skewness: float
    kurtosis: float
    sharpe: float | None
    omega: float
    information_ratio: float | None
    ir_note: str | None = None


def _series(returns) -> np.ndarray:
    r = np.asarray(returns, dtype=np.float64).ravel()
    if r.size == 0:
        raise MetricsError("empty return series")
    return r


def _is_constant(r: np.ndarray) -> bool:
    return bool(np.all(r == r[0]))


def sharpe(returns, risk_free: float = 0.0, annualization: float = 252.0) -> float | None:
    """Annualized mean excess over annualized stdev; None if excess <= 0.

    ``risk_free`` is a per-period (daily) rate, annualized with the same
    factor as the returns.
    """
    r = _series(returns)
    if r.size < 2:
        raise MetricsError("Sharpe ratio needs at least 2 observations")
    sd = float(r.std(ddof=1))
    if sd == 0.0 or _is_constant(r):
        raise MetricsError("Sharpe ratio undefined: zero standard deviation")
    excess_annual = (float(r.mean()) - risk_free) * annualization
    if excess_annual <= 0.0:
        return None
    return excess_annual / (sd * math.sqrt(annualization))


def information_ratio(returns, benchmark_returns) -> float | None:
    """mean(active) / population-std(active); None when the std is zero."""
    r = _series(returns)
    b = _series(benchmark_returns)
    if r.shape != b.shape:
        raise MetricsError(f"series length mismatch: {r.size} vs {b.size}")
    delta = r - b
    sd = float(delta.std(ddof=0))
    if sd == 0.0 or _is_constant(delta):
        if float(delta.mean()) > 0.0:
            logger.warning("information ratio undefined: strategy dominates "
                           "benchmark deterministically")
        return None
    return float(delta.mean()) / sd


def omega(returns, threshold: float = 0.0) -> float:
    """Mean gain above the threshold over mean loss below it; +inf if no losses."""
    r = _series(returns)
    gains = float(np.maximum(r - threshold, 0.0).mean())
    losses = float(np.maximum(threshold - r, 0.0).mean())
    if losses == 0.0:
        return math.inf
    return gains / losses


def summarize(report: BacktestReport, benchmark: BacktestReport,
              epsilon: float = 0.0, risk_free: float = 0.0,
              annualization: float = 252.0) -> PerformanceSummary:
    """One summary-table row for a strategy, benchmarked for the IR."""
    r = _series(report.oos_returns)
    b = _series(benchmark.oos_returns)
    if r.shape != b.shape:
        raise MetricsError("report and benchmark do not share a window plan")
    if r.size < 2:
        raise MetricsError("summary needs at least 2 observations")

    mean_annual = float(r.mean()) * annualization
    stdev_annual = float(r.std(ddof=1)) * math.sqrt(annualization)
    ir = information_ratio(r, b)
    ir_note = None
    if ir is None and float((r - b).mean()) > 0.0:
        ir_note = "dominates benchmark deterministically"
    return PerformanceSummary(
        strategy=str(report.strategy.value),
        mean_annual=mean_annual,
        stdev_annual=stdev_annual,
        skewness=float(stats.skew(r, bias=True)),
        kurtosis=float(stats.kurtosis(r, fisher=False, bias=True)),
        sharpe=sharpe(r, risk_free=risk_free, annualization=annualization),
        omega=omega(r, threshold=epsilon),
        information_ratio=ir,
        ir_note=ir_note,
    )
