"""FastAPI application exposing the allocation pipeline.

Run with: uvicorn netfolio.service.app:app
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import NetfolioError
from . import handlers, schemas

app = FastAPI(
    title="netfolio",
    description="Network-based portfolio selection: dependence networks, "
                "clustering-coefficient allocation, rolling backtests.",
    version=__version__,
)


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


@app.post("/backtest", response_model=schemas.BacktestResponse)
def backtest(request: schemas.BacktestRequest) -> schemas.BacktestResponse:
    try:
        return handlers.handle_backtest(request)
    except NetfolioError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/snapshot", response_model=schemas.SnapshotResponse)
def snapshot(request: schemas.SnapshotRequest) -> schemas.SnapshotResponse:
    try:
        return handlers.handle_snapshot(request)
    except NetfolioError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/synthetic", response_model=schemas.SyntheticResponse)
def synthetic(request: schemas.SyntheticRequest) -> schemas.SyntheticResponse:
    try:
        return handlers.handle_synthetic(request)
    except NetfolioError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
