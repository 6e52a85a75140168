"""Rolling-window protocol: estimate in-sample, hold out-of-sample.

For each window the strategy weights are estimated on the in-sample
range only, then applied buy-and-hold across the out-of-sample range.
Daily portfolio log returns convert member log returns to simple
returns, aggregate with the weights, and convert back. Turnover couples
consecutive windows and is computed in a sequential pass once all
weights exist.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import BacktestError, NetfolioError
from .market_data import ReturnPanel, WindowPlan
from .strategies import (
    NETWORK_KINDS,
    Strategy,
    ew_portfolio,
    gmv_portfolio,
    network_analysis,
)


@dataclass(frozen=True)
class WindowRecord:
    window_id: int
    in_start: date
    in_end: date
    oos_start: date
    oos_end: date
    weights: np.ndarray
    herfindahl: float
    turnover: float | None       # absent for the first window
    avg_clustering: float | None  # network strategies only
    oos_log_return: float         # window aggregate of the daily series


@dataclass(frozen=True)
class BacktestReport:
    strategy: Strategy
    per_window: tuple[WindowRecord, ...]
    oos_dates: tuple[date, ...]
    oos_returns: np.ndarray       # concatenated daily portfolio log returns
    cumulative_value: np.ndarray  # growth of 1, one point per oos day


def herfindahl(weights: np.ndarray) -> float:
    """Normalized concentration (x'x - 1/N) / (1 - 1/N); 0 for EW, 1 for one asset.

    Computed in the centered form sum((x_i - 1/N)^2) / (1 - 1/N), which is
    identical on the simplex and exactly zero for equal weights.
    """
    w = np.asarray(weights, dtype=np.float64)
    n = w.shape[0]
    if n < 2:
        raise NetfolioError("Herfindahl index needs at least 2 assets")
    centered = w - 1.0 / n
    return float(centered @ centered) / (1.0 - 1.0 / n)


def turnover(current: np.ndarray, previous: np.ndarray) -> float:
    """L1 distance between consecutive optimal weight vectors."""
    cur = np.asarray(current, dtype=np.float64)
    prev = np.asarray(previous, dtype=np.float64)
    if cur.shape != prev.shape:
        raise NetfolioError(f"weight length mismatch: {cur.shape} vs {prev.shape}")
    return float(np.abs(cur - prev).sum())


def _window_weights(strategy: Strategy, in_returns: np.ndarray, window_id: int,
                    tail_q: float, grid_size: int):
    """Weights plus the average clustering coefficient (None when no network)."""
    if strategy == Strategy.EW:
        return ew_portfolio(in_returns.shape[1], window_id).weights, None
    if strategy == Strategy.GMV:
        return gmv_portfolio(in_returns, window_id).weights, None
    kind = NETWORK_KINDS[strategy]
    result = network_analysis(in_returns, kind, q=tail_q, grid_size=grid_size,
                              window_id=window_id)
    return result.portfolio.weights, float(result.profile.per_asset.mean())


def run_backtest(panel: ReturnPanel, plan: WindowPlan, strategy: Strategy,
                 tail_q: float = 0.05, grid_size: int = 201) -> BacktestReport:
    """Execute the rolling protocol for one strategy over the whole plan."""
    weights_per_window: list[np.ndarray] = []
    clustering_per_window: list[float | None] = []
    daily_chunks: list[np.ndarray] = []
    oos_dates: list[date] = []

    for w, ((a, b), (c, d)) in enumerate(plan.windows):
        try:
            weights, avg_cl = _window_weights(
                strategy, panel.returns[a:b], w, tail_q, grid_size
            )
        except NetfolioError as exc:
            raise BacktestError(f"window {w}: {exc}") from exc
        weights_per_window.append(weights)
        clustering_per_window.append(avg_cl)

        simple = np.expm1(panel.returns[c:d])
        daily_chunks.append(np.log1p(simple @ weights))
        oos_dates.extend(panel.dates[c:d])

    records = []
    for w, ((a, b), (c, d)) in enumerate(plan.windows):
        theta = turnover(weights_per_window[w], weights_per_window[w - 1]) if w > 0 else None
        records.append(WindowRecord(
            window_id=w,
            in_start=panel.dates[a],
            in_end=panel.dates[b - 1],
            oos_start=panel.dates[c],
            oos_end=panel.dates[d - 1],
            weights=weights_per_window[w],
            herfindahl=herfindahl(weights_per_window[w]),
            turnover=theta,
            avg_clustering=clustering_per_window[w],
            oos_log_return=float(daily_chunks[w].sum()),
        ))

    oos_returns = np.concatenate(daily_chunks)
    cumulative = np.exp(np.cumsum(oos_returns))
    return BacktestReport(
        strategy=strategy,
        per_window=tuple(records),
        oos_dates=tuple(oos_dates),
        oos_returns=oos_returns,
        cumulative_value=cumulative,
    )
