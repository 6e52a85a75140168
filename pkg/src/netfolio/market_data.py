"""Return-panel ingestion and rolling-window planning.

Input files are delimited text with a header row ``date,<asset>,...``,
ISO-8601 dates, decimal-point numerics, and empty cells for missing
observations. Assets with any missing value are dropped from the panel
and reported through the module logger.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from datetime import date
from typing import IO, Sequence

import numpy as np

from .errors import DataError

logger = logging.getLogger(__name__)

MODE_PRICES = "prices"
MODE_RETURNS = "returns"


@dataclass(frozen=True)
class ReturnPanel:
    """Date-indexed matrix of daily log returns, one column per asset."""

    dates: tuple[date, ...]
    assets: tuple[str, ...]
    returns: np.ndarray  # T x N, float64

    def __post_init__(self):
        arr = np.ascontiguousarray(self.returns, dtype=np.float64)
        if arr.ndim != 2:
            raise DataError("returns must be a 2-D matrix")
        t, n = arr.shape
        if n < 2:
            raise DataError(f"panel needs at least 2 assets, got {n}")
        if t < 2:
            raise DataError(f"panel needs at least 2 observations, got {t}")
        if len(self.dates) != t:
            raise DataError(f"{len(self.dates)} dates for {t} return rows")
        if len(self.assets) != n:
            raise DataError(f"{len(self.assets)} asset ids for {n} columns")
        if not np.all(np.isfinite(arr)):
            raise DataError("panel contains non-finite returns")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise DataError(f"dates not strictly increasing at {cur}")
        arr.setflags(write=False)
        object.__setattr__(self, "returns", arr)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "assets", tuple(self.assets))

    @property
    def n_assets(self) -> int:
        return self.returns.shape[1]

    @property
    def n_obs(self) -> int:
        return self.returns.shape[0]


@dataclass(frozen=True)
class WindowPlan:
    """Rolling split of a panel into in-sample / out-of-sample index ranges.

    Each window is ``((in_start, in_end), (oos_start, oos_end))`` with
    half-open row ranges into the panel; the out-of-sample range starts
    exactly where the in-sample range ends.
    """

    in_sample_months: int
    step_months: int
    windows: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    def __post_init__(self):
        if not self.windows:
            raise DataError("window plan is empty")
        for (a, b), (c, d) in self.windows:
            if not (a < b and c < d):
                raise DataError("window ranges must be nonempty")
            if b != c:
                raise DataError("out-of-sample range must start at in-sample end")

    @property
    def n_windows(self) -> int:
        return len(self.windows)


def _parse_float(cell: str, row: int, asset: str) -> float:
    text = cell.strip()
    if not text:
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise DataError(f"unparseable value {text!r} for {asset} on row {row}") from None


def _read_table(source, delimiter: str):
    """Parse the raw table into (dates, assets, values) with NaN for gaps."""
    if isinstance(source, str) or hasattr(source, "__fspath__"):
        with open(source, "r", newline="", encoding="utf-8") as fh:
            return _read_table(fh, delimiter)
    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("input file is empty") from None
    if len(header) < 3:
        raise DataError("header must list a date column and at least 2 assets")
    if header[0].strip().lower() != "date":
        raise DataError(f"first header column must be 'date', got {header[0]!r}")
    assets = [h.strip() for h in header[1:]]
    if len(set(assets)) != len(assets):
        raise DataError("duplicate asset ids in header")

    dates, rows = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(f"row {lineno} has {len(row)} cells, expected {len(header)}")
        try:
            dates.append(date.fromisoformat(row[0].strip()))
        except ValueError:
            raise DataError(f"unparseable date {row[0]!r} on row {lineno}") from None
        rows.append([_parse_float(c, lineno, a) for c, a in zip(row[1:], assets)])
    if not rows:
        raise DataError("input file has no data rows")

    values = np.asarray(rows, dtype=np.float64)
    order = np.argsort(dates, kind="stable")
    dates = [dates[i] for i in order]
    values = values[order]
    for prev, cur in zip(dates, dates[1:]):
        if cur == prev:
            raise DataError(f"duplicate date {cur}")
    return dates, assets, values


def load_panel(source: str | IO[str], mode: str = MODE_RETURNS, delimiter: str = ",") -> ReturnPanel:
    """Load a price or return file into a clean ``ReturnPanel``.

    Assets with any missing observation are dropped and logged (one id
    per line). In prices mode, returns are ``log(P_t / P_{t-1})`` and all
    prices must be strictly positive.
    """
    if mode not in (MODE_PRICES, MODE_RETURNS):
        raise DataError(f"mode must be '{MODE_PRICES}' or '{MODE_RETURNS}', got {mode!r}")
    dates, assets, values = _read_table(source, delimiter)

    keep = ~np.isnan(values).any(axis=0)
    dropped = [a for a, k in zip(assets, keep) if not k]
    for asset in dropped:
        logger.warning("dropped asset with missing observations: %s", asset)
    assets = [a for a, k in zip(assets, keep) if k]
    values = values[:, keep]
    if len(assets) < 2:
        raise DataError(
            f"fewer than 2 assets survive cleaning ({len(assets)} left, dropped {dropped})"
        )

    if mode == MODE_PRICES:
        bad = np.nonzero(values <= 0.0)
        if bad[0].size:
            r, c = bad[0][0], bad[1][0]
            raise DataError(
                f"non-positive price {values[r, c]} for {assets[c]} on {dates[r]}"
            )
        returns = np.log(values[1:] / values[:-1])
        dates = dates[1:]
    else:
        returns = values

    return ReturnPanel(dates=tuple(dates), assets=tuple(assets), returns=returns)


def export_panel(panel: ReturnPanel, dest: str | IO[str], delimiter: str = ",") -> None:
    """Write a panel as returns-mode delimited text (full float precision)."""
    if isinstance(dest, str) or hasattr(dest, "__fspath__"):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            export_panel(panel, fh, delimiter)
            return
    dest.write(render_panel_csv(panel, delimiter))


def render_panel_csv(panel: ReturnPanel, delimiter: str = ",") -> str:
    """Render a panel to returns-mode text; reloading round-trips bit-for-bit."""
    out = io.StringIO()
    out.write("date" + delimiter + delimiter.join(panel.assets) + "\n")
    for d, row in zip(panel.dates, panel.returns):
        out.write(d.isoformat())
        for x in row:
            out.write(delimiter + repr(float(x)))
        out.write("\n")
    return out.getvalue()


def _month_starts(dates: Sequence[date]) -> list[int]:
    """Indices where a new (year, month) pair begins."""
    starts = [0]
    for i in range(1, len(dates)):
        if (dates[i].year, dates[i].month) != (dates[i - 1].year, dates[i - 1].month):
            starts.append(i)
    return starts


def plan_windows(panel: ReturnPanel, n_months: int, h_months: int) -> WindowPlan:
    """Split the panel into monthly-stepped rolling windows.

    A month boundary is the first trading date with a new (year, month)
    pair. Window k covers months ``[k*h, k*h + n)`` in-sample and the
    following ``h`` months out-of-sample; windows that cannot fit a full
    out-of-sample step are excluded.
    """
    if n_months < 1:
        raise DataError(f"in-sample length must be >= 1 month, got {n_months}")
    if h_months < 1:
        raise DataError(f"step length must be >= 1 month, got {h_months}")
    starts = _month_starts(panel.dates)
    n_total_months = len(starts)
    bounds = starts + [panel.n_obs]  # bounds[m] = first row of month m

    if n_months + h_months > n_total_months:
        raise DataError(
            f"panel spans {n_total_months} months; need at least "
            f"{n_months + h_months} for in-sample n={n_months} plus step h={h_months}"
        )

    windows = []
    k = 0
    while k * h_months + n_months + h_months <= n_total_months:
        m0 = k * h_months
        in_range = (bounds[m0], bounds[m0 + n_months])
        oos_range = (bounds[m0 + n_months], bounds[m0 + n_months + h_months])
        windows.append((in_range, oos_range))
        k += 1
    return WindowPlan(in_sample_months=n_months, step_months=h_months, windows=tuple(windows))


def window_dates(panel: ReturnPanel, plan: WindowPlan, window_id: int) -> dict:
    """Calendar labels for one window (used by reports and plot files)."""
    (a, b), (c, d) = plan.windows[window_id]
    return {
        "in_start": panel.dates[a],
        "in_end": panel.dates[b - 1],
        "oos_start": panel.dates[c],
        "oos_end": panel.dates[d - 1],
    }
