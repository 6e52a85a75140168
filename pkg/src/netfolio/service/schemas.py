"""Pydantic request/response models for the allocation service."""
from __future__ import annotations

from datetime import date
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

StrategyName = Literal["gmv", "pna", "kna", "tna", "ew"]

DEFAULT_STRATEGIES: list[StrategyName] = ["gmv", "pna", "kna", "tna", "ew"]


class PanelPayload(BaseModel):
    """Inline delimited-text panel: header 'date,<asset>,...', ISO dates."""

    csv_text: str
    mode: Literal["prices", "returns"] = "returns"
    delimiter: str = Field(",", min_length=1, max_length=1)


class RunOptionsModel(BaseModel):
    """Experiment knobs; defaults mirror the headline protocol."""

    strategies: list[StrategyName] = Field(default_factory=lambda: list(DEFAULT_STRATEGIES),
                                           min_length=1)
    in_sample_months: int = Field(24, ge=1)
    step_months: int = Field(1, ge=1)
    tail_q: float = Field(0.05, gt=0.0, lt=0.5)
    grid_size: int = Field(201, ge=2)
    epsilon: float = 0.0
    risk_free: float = 0.0
    annualization: float = Field(252.0, gt=0.0)


class BacktestRequest(BaseModel):
    panel: PanelPayload
    options: RunOptionsModel = Field(default_factory=RunOptionsModel)


class SummaryRow(BaseModel):
    strategy: str
    mean_annual: float
    stdev_annual: float
    skewness: float
    kurtosis: float
    sharpe: Optional[float] = None
    omega: float
    information_ratio: Optional[float] = None
    ir_note: Optional[str] = None


class BacktestResponse(BaseModel):
    config: dict
    n_assets: int
    n_windows: int
    resolved_strategies: list[str]
    summary: list[SummaryRow]
    files: dict[str, str]


class SnapshotRequest(BaseModel):
    panel: PanelPayload
    options: RunOptionsModel = Field(default_factory=RunOptionsModel)
    window: int = Field(ge=0)


class SnapshotResponse(BaseModel):
    config: dict
    window: int
    kind: str
    n_nodes: int
    n_edges: int
    files: dict[str, str]


class SyntheticRequest(BaseModel):
    block_size: int = Field(5, ge=0)
    block_rho: float = 0.9
    n_independent: int = Field(5, ge=0)
    months: Optional[int] = Field(None, ge=1)
    days: Optional[int] = Field(None, ge=2)
    start: date = date(2020, 1, 1)
    daily_vol: float = Field(0.01, gt=0.0)
    seed: int = 0

    @model_validator(mode="after")
    def _one_length_spec(self):
        if (self.months is None) == (self.days is None):
            raise ValueError("specify exactly one of 'months' or 'days'")
        return self


class SyntheticResponse(BaseModel):
    config: dict
    n_assets: int
    n_obs: int
    files: dict[str, str]


class HealthResponse(BaseModel):
    status: str
    version: str
