"""Seeded synthetic return panels with block-correlation structure.

One dense block of mutually correlated assets plus an independent
periphery, sampled from a multivariate normal on weekday calendars.
Used for acceptance fixtures and demos; same seed, same panel.
"""
from __future__ import annotations

import calendar
from datetime import date, timedelta

import numpy as np

from .errors import DataError
from .market_data import ReturnPanel


def weekday_dates(start: date, count: int) -> list[date]:
    """The first ``count`` weekdays on or after ``start``."""
    out: list[date] = []
    d = start
    while len(out) < count:
        if d.weekday() < 5:
            out.append(d)
        d += timedelta(days=1)
    return out


def weekday_dates_by_months(start: date, months: int) -> list[date]:
    """All weekdays of ``months`` consecutive calendar months from ``start``'s month."""
    out: list[date] = []
    year, month = start.year, start.month
    for _ in range(months):
        _, last = calendar.monthrange(year, month)
        for day in range(1, last + 1):
            d = date(year, month, day)
            if d.weekday() < 5:
                out.append(d)
        month += 1
        if month > 12:
            month, year = 1, year + 1
    return out


def block_correlation(block_size: int, block_rho: float, n_independent: int) -> np.ndarray:
    """Correlation matrix: one equicorrelated block, identity elsewhere."""
    n = block_size + n_independent
    if n < 2:
        raise DataError(f"universe needs at least 2 assets, got {n}")
    if block_size >= 2:
        lo = -1.0 / (block_size - 1)
        if not lo < block_rho < 1.0:
            raise DataError(
                f"block correlation {block_rho} outside ({lo:.4f}, 1) "
                f"for block size {block_size}"
            )
    corr = np.eye(n)
    corr[:block_size, :block_size] = block_rho
    np.fill_diagonal(corr, 1.0)
    return corr


def synthetic_panel(block_size: int, block_rho: float, n_independent: int,
                    months: int | None = None, days: int | None = None,
                    start: date = date(2020, 1, 1), daily_vol: float = 0.01,
                    seed: int = 0) -> ReturnPanel:
    """Sample a seeded panel; block assets are named blk*, the rest ind*."""
    if (months is None) == (days is None):
        raise DataError("specify exactly one of months or days")
    if daily_vol <= 0.0:
        raise DataError(f"daily_vol must be positive, got {daily_vol}")
    corr = block_correlation(block_size, block_rho, n_independent)
    dates = (weekday_dates_by_months(start, months) if months is not None
             else weekday_dates(start, days))
    if len(dates) < 2:
        raise DataError("panel needs at least 2 observations")

    chol = np.linalg.cholesky(corr)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((len(dates), corr.shape[0]))
    returns = (z @ chol.T) * daily_vol

    assets = [f"blk{i + 1:02d}" for i in range(block_size)]
    assets += [f"ind{i + 1:02d}" for i in range(n_independent)]
    return ReturnPanel(dates=tuple(dates), assets=tuple(assets), returns=returns)
