"""End-to-end runs: backtest bundles, network snapshots, synthetic panels.

This is the layer the service endpoints call. Each function takes plain
domain inputs, runs the full computation, and returns both the in-memory
results and the rendered artifact files keyed by filename.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

import numpy as np

from . import reporting
from .backtest import BacktestReport, run_backtest
from .errors import ConfigError
from .market_data import ReturnPanel, WindowPlan, plan_windows, render_panel_csv
from .metrics import PerformanceSummary, summarize
from .strategies import NETWORK_KINDS, Strategy, ew_portfolio, gmv_portfolio, network_analysis
from .synthetic import synthetic_panel

CANONICAL_ORDER = (Strategy.GMV, Strategy.PNA, Strategy.KNA, Strategy.TNA, Strategy.EW)


@dataclass(frozen=True)
class RunOptions:
    """Resolved experiment knobs; defaults mirror the headline protocol."""

    strategies: tuple[Strategy, ...] = CANONICAL_ORDER
    in_sample_months: int = 24
    step_months: int = 1
    tail_q: float = 0.05
    grid_size: int = 201
    epsilon: float = 0.0
    risk_free: float = 0.0
    annualization: float = 252.0

    def __post_init__(self):
        if not self.strategies:
            raise ConfigError("strategies: must not be empty")
        if self.in_sample_months < 1:
            raise ConfigError(f"in_sample_months: must be >= 1, got {self.in_sample_months}")
        if self.step_months < 1:
            raise ConfigError(f"step_months: must be >= 1, got {self.step_months}")
        if not 0.0 < self.tail_q < 0.5:
            raise ConfigError(f"tail_q: must be in (0, 0.5), got {self.tail_q}")
        if self.grid_size < 2:
            raise ConfigError(f"grid_size: must be >= 2, got {self.grid_size}")
        if self.annualization <= 0.0:
            raise ConfigError(f"annualization: must be positive, got {self.annualization}")
        object.__setattr__(self, "strategies", tuple(Strategy(s) for s in self.strategies))

    def echo(self) -> dict:
        return {
            "strategies": [s.value for s in self.strategies],
            "in_sample_months": self.in_sample_months,
            "step_months": self.step_months,
            "tail_q": self.tail_q,
            "grid_size": self.grid_size,
            "epsilon": self.epsilon,
            "risk_free": self.risk_free,
            "annualization": self.annualization,
        }


def resolved_strategies(options: RunOptions) -> tuple[Strategy, ...]:
    """Requested strategies in canonical order, with GMV added for the IR benchmark."""
    wanted = set(options.strategies) | {Strategy.GMV}
    return tuple(s for s in CANONICAL_ORDER if s in wanted)


@dataclass(frozen=True)
class BacktestArtifacts:
    plan: WindowPlan
    reports: dict[Strategy, BacktestReport]
    summaries: tuple[PerformanceSummary, ...]
    resolved: tuple[Strategy, ...]
    files: dict[str, str] = field(repr=False)


def execute_backtest(panel: ReturnPanel, options: RunOptions) -> BacktestArtifacts:
    """Run every resolved strategy over the plan and render the artifact bundle."""
    plan = plan_windows(panel, options.in_sample_months, options.step_months)
    order = resolved_strategies(options)
    reports = {
        strat: run_backtest(panel, plan, strat,
                            tail_q=options.tail_q, grid_size=options.grid_size)
        for strat in order
    }
    benchmark = reports[Strategy.GMV]
    summaries = tuple(
        summarize(reports[s], benchmark, epsilon=options.epsilon,
                  risk_free=options.risk_free, annualization=options.annualization)
        for s in order
    )

    files = {}
    for strat in order:
        files[f"report_{strat.value}.json"] = reporting.render_json(
            reporting.report_document(reports[strat], panel)
        )
    files["summary.csv"] = reporting.render_summary_csv(summaries)
    files["summary.json"] = reporting.render_summary_json(
        summaries, options.epsilon, options.risk_free, options.annualization
    )
    files.update(reporting.render_series_files(reports, order))
    return BacktestArtifacts(plan=plan, reports=reports, summaries=summaries,
                             resolved=order, files=files)


@dataclass(frozen=True)
class SnapshotArtifacts:
    window_id: int
    kind: str
    n_nodes: int
    n_edges: int
    files: dict[str, str] = field(repr=False)


def execute_snapshot(panel: ReturnPanel, options: RunOptions, window_id: int) -> SnapshotArtifacts:
    """Node and edge tables for one window's dependence network.

    The dependence kind is taken from the first network strategy in the
    request; weight columns cover every resolved strategy.
    """
    plan = plan_windows(panel, options.in_sample_months, options.step_months)
    if not 0 <= window_id < plan.n_windows:
        raise ConfigError(
            f"window: index {window_id} outside plan with {plan.n_windows} windows"
        )
    order = resolved_strategies(options)
    network_strategies = [s for s in order if s in NETWORK_KINDS]
    if not network_strategies:
        raise ConfigError("strategies: snapshot needs at least one network strategy "
                          "(pna, kna or tna) to pick the dependence kind")
    kind = NETWORK_KINDS[network_strategies[0]]

    (a, b), _ = plan.windows[window_id]
    in_returns = panel.returns[a:b]
    result = network_analysis(in_returns, kind, q=options.tail_q,
                              grid_size=options.grid_size, window_id=window_id)

    weights: dict[Strategy, np.ndarray] = {}
    for strat in order:
        if strat == Strategy.EW:
            weights[strat] = ew_portfolio(panel.n_assets, window_id).weights
        elif strat == Strategy.GMV:
            weights[strat] = gmv_portfolio(in_returns, window_id).weights
        elif strat == network_strategies[0]:
            weights[strat] = result.portfolio.weights
        else:
            weights[strat] = network_analysis(
                in_returns, NETWORK_KINDS[strat], q=options.tail_q,
                grid_size=options.grid_size, window_id=window_id,
            ).portfolio.weights

    sigma = np.sqrt(np.diag(result.matrices.sigma))
    files = {
        "nodes.csv": reporting.render_nodes_csv(
            panel.assets, sigma, result.profile.per_asset, weights, order
        ),
        "edges.csv": reporting.render_edges_csv(panel.assets, result.dependence.weights),
    }
    n = panel.n_assets
    return SnapshotArtifacts(window_id=window_id, kind=kind.value, n_nodes=n,
                             n_edges=n * (n - 1) // 2, files=files)


@dataclass(frozen=True)
class SyntheticArtifacts:
    panel: ReturnPanel
    files: dict[str, str] = field(repr=False)


def execute_synthetic(block_size: int, block_rho: float, n_independent: int,
                      months: int | None = None, days: int | None = None,
                      start: date = date(2020, 1, 1), daily_vol: float = 0.01,
                      seed: int = 0) -> SyntheticArtifacts:
    """Generate a seeded block-structured panel and its returns-mode file."""
    panel = synthetic_panel(block_size, block_rho, n_independent,
                            months=months, days=days, start=start,
                            daily_vol=daily_vol, seed=seed)
    return SyntheticArtifacts(panel=panel, files={"panel.csv": render_panel_csv(panel)})
