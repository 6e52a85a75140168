"""Request handlers shared by the HTTP routes and the in-process CLI client.

Each handler turns a request model into core-pipeline calls and packs the
results back into a response model; they raise NetfolioError subclasses,
which the HTTP layer maps to status codes.
"""
from __future__ import annotations

import io

from .. import pipeline
from ..market_data import load_panel
from ..strategies import Strategy
from . import schemas


def _parse_panel(payload: schemas.PanelPayload):
    return load_panel(io.StringIO(payload.csv_text), mode=payload.mode,
                      delimiter=payload.delimiter)


def _options(model: schemas.RunOptionsModel) -> pipeline.RunOptions:
    return pipeline.RunOptions(
        strategies=tuple(Strategy(s) for s in model.strategies),
        in_sample_months=model.in_sample_months,
        step_months=model.step_months,
        tail_q=model.tail_q,
        grid_size=model.grid_size,
        epsilon=model.epsilon,
        risk_free=model.risk_free,
        annualization=model.annualization,
    )


def handle_backtest(request: schemas.BacktestRequest) -> schemas.BacktestResponse:
    panel = _parse_panel(request.panel)
    options = _options(request.options)
    artifacts = pipeline.execute_backtest(panel, options)
    config = {"mode": request.panel.mode, "delimiter": request.panel.delimiter,
              **options.echo()}
    return schemas.BacktestResponse(
        config=config,
        n_assets=panel.n_assets,
        n_windows=artifacts.plan.n_windows,
        resolved_strategies=[s.value for s in artifacts.resolved],
        summary=[schemas.SummaryRow(**{
            "strategy": row.strategy,
            "mean_annual": row.mean_annual,
            "stdev_annual": row.stdev_annual,
            "skewness": row.skewness,
            "kurtosis": row.kurtosis,
            "sharpe": row.sharpe,
            "omega": row.omega,
            "information_ratio": row.information_ratio,
            "ir_note": row.ir_note,
        }) for row in artifacts.summaries],
        files=artifacts.files,
    )


def handle_snapshot(request: schemas.SnapshotRequest) -> schemas.SnapshotResponse:
    panel = _parse_panel(request.panel)
    options = _options(request.options)
    artifacts = pipeline.execute_snapshot(panel, options, request.window)
    config = {"mode": request.panel.mode, "delimiter": request.panel.delimiter,
              "window": request.window, **options.echo()}
    return schemas.SnapshotResponse(
        config=config,
        window=artifacts.window_id,
        kind=artifacts.kind,
        n_nodes=artifacts.n_nodes,
        n_edges=artifacts.n_edges,
        files=artifacts.files,
    )


def handle_synthetic(request: schemas.SyntheticRequest) -> schemas.SyntheticResponse:
    artifacts = pipeline.execute_synthetic(
        block_size=request.block_size,
        block_rho=request.block_rho,
        n_independent=request.n_independent,
        months=request.months,
        days=request.days,
        start=request.start,
        daily_vol=request.daily_vol,
        seed=request.seed,
    )
    config = {
        "block_size": request.block_size,
        "block_rho": request.block_rho,
        "n_independent": request.n_independent,
        "months": request.months,
        "days": request.days,
        "start": request.start.isoformat(),
        "daily_vol": request.daily_vol,
        "seed": request.seed,
    }
    return schemas.SyntheticResponse(
        config=config,
        n_assets=artifacts.panel.n_assets,
        n_obs=artifacts.panel.n_obs,
        files=artifacts.files,
    )
