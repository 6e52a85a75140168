"""Deterministic rendering of run artifacts to text.

Every number is written with the shortest round-trip decimal (Python's
float repr); absent values are empty CSV cells or JSON nulls. The same
bytes come out of the in-process and HTTP paths, which is what the
determinism contract of the CLI rests on.
"""
from __future__ import annotations

import io
import json
from typing import Mapping, Sequence

import numpy as np

from .backtest import BacktestReport
from .market_data import ReturnPanel
from .metrics import CONVENTIONS, PerformanceSummary
from .strategies import NETWORK_KINDS, SUPPORT_THRESHOLD, Strategy

SUMMARY_COLUMNS = ("strategy", "mean_annual", "stdev_annual", "skewness",
                   "kurtosis", "sharpe", "omega", "information_ratio")


def fmt(value) -> str:
    """Shortest round-trip decimal; empty string for absent values."""
    if value is None:
        return ""
    return repr(float(value))


def render_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def summary_row_dict(row: PerformanceSummary) -> dict:
    d = {
        "strategy": row.strategy,
        "mean_annual": row.mean_annual,
        "stdev_annual": row.stdev_annual,
        "skewness": row.skewness,
        "kurtosis": row.kurtosis,
        "sharpe": row.sharpe,
        "omega": row.omega,
        "information_ratio": row.information_ratio,
    }
    if row.ir_note:
        d["ir_note"] = row.ir_note
    return d


def render_summary_csv(rows: Sequence[PerformanceSummary]) -> str:
    out = io.StringIO()
    out.write(",".join(SUMMARY_COLUMNS) + "\n")
    for row in rows:
        d = summary_row_dict(row)
        out.write(row.strategy)
        for col in SUMMARY_COLUMNS[1:]:
            out.write("," + fmt(d[col]))
        out.write("\n")
    return out.getvalue()


def render_summary_json(rows: Sequence[PerformanceSummary], epsilon: float,
                        risk_free: float, annualization: float) -> str:
    return render_json({
        "conventions": CONVENTIONS,
        "epsilon": epsilon,
        "risk_free": risk_free,
        "annualization": annualization,
        "rows": [summary_row_dict(r) for r in rows],
    })


def report_document(report: BacktestReport, panel: ReturnPanel) -> dict:
    """Machine-readable document for one strategy's backtest run."""
    windows = []
    for rec in report.per_window:
        windows.append({
            "window_id": rec.window_id,
            "in_start": rec.in_start.isoformat(),
            "in_end": rec.in_end.isoformat(),
            "oos_start": rec.oos_start.isoformat(),
            "oos_end": rec.oos_end.isoformat(),
            "herfindahl": rec.herfindahl,
            "turnover": rec.turnover,
            "avg_clustering": rec.avg_clustering,
            "oos_log_return": rec.oos_log_return,
            "support_size": int((rec.weights > SUPPORT_THRESHOLD).sum()),
            "weights": {a: float(w) for a, w in zip(panel.assets, rec.weights)},
        })
    return {
        "strategy": report.strategy.value,
        "conventions": CONVENTIONS,
        "n_windows": len(report.per_window),
        "windows": windows,
        "oos": {
            "dates": [d.isoformat() for d in report.oos_dates],
            "log_returns": [float(x) for x in report.oos_returns],
            "cumulative_value": [float(x) for x in report.cumulative_value],
        },
    }


def _window_series_csv(reports: Mapping[Strategy, BacktestReport],
                       order: Sequence[Strategy], field: str) -> str:
    """One row per window: ids, dates, then one column per strategy."""
    out = io.StringIO()
    out.write("window_id,in_start,oos_start")
    for strat in order:
        out.write(f",{strat.value}")
    out.write("\n")
    reference = reports[order[0]]
    for w, rec in enumerate(reference.per_window):
        out.write(f"{w},{rec.in_start.isoformat()},{rec.oos_start.isoformat()}")
        for strat in order:
            out.write("," + fmt(getattr(reports[strat].per_window[w], field)))
        out.write("\n")
    return out.getvalue()


def _daily_series_csv(reports: Mapping[Strategy, BacktestReport],
                      order: Sequence[Strategy], field: str) -> str:
    out = io.StringIO()
    out.write("date" + "".join(f",{s.value}" for s in order) + "\n")
    reference = reports[order[0]]
    for i, d in enumerate(reference.oos_dates):
        out.write(d.isoformat())
        for strat in order:
            out.write("," + fmt(getattr(reports[strat], field)[i]))
        out.write("\n")
    return out.getvalue()


def render_series_files(reports: Mapping[Strategy, BacktestReport],
                        order: Sequence[Strategy]) -> dict[str, str]:
    """The four plot-data files plus the flat daily return series."""
    network_order = [s for s in order if s in NETWORK_KINDS]
    reference = reports[order[0]]
    if network_order:
        clustering = _window_series_csv(reports, network_order, "avg_clustering")
    else:
        clustering = "window_id,in_start,oos_start\n" + "".join(
            f"{w},{rec.in_start.isoformat()},{rec.oos_start.isoformat()}\n"
            for w, rec in enumerate(reference.per_window)
        )
    return {
        "performance.csv": _daily_series_csv(reports, order, "cumulative_value"),
        "oos_returns.csv": _daily_series_csv(reports, order, "oos_returns"),
        "turnover.csv": _window_series_csv(reports, order, "turnover"),
        "herfindahl.csv": _window_series_csv(reports, order, "herfindahl"),
        "avg_clustering.csv": clustering,
    }


def render_nodes_csv(assets: Sequence[str], sigma: np.ndarray, clustering: np.ndarray,
                     weights: Mapping[Strategy, np.ndarray],
                     order: Sequence[Strategy]) -> str:
    out = io.StringIO()
    out.write("asset,sigma,clustering")
    for strat in order:
        out.write(f",weight_{strat.value}")
    out.write("\n")
    for i, asset in enumerate(assets):
        out.write(f"{asset},{fmt(sigma[i])},{fmt(clustering[i])}")
        for strat in order:
            out.write("," + fmt(weights[strat][i]))
        out.write("\n")
    return out.getvalue()


def render_edges_csv(assets: Sequence[str], weights: np.ndarray) -> str:
    out = io.StringIO()
    out.write("asset_i,asset_j,weight\n")
    n = len(assets)
    for i in range(n):
        for j in range(i + 1, n):
            out.write(f"{assets[i]},{assets[j]},{fmt(weights[i, j])}\n")
    return out.getvalue()
