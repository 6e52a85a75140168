"""Per-window optimal portfolios for the five strategies.

GMV minimizes the normalized covariance; PNA/KNA/TNA run the network
pipeline (dependence matrix -> integrated clustering -> H) and minimize
x' H x; EW is the estimation-free 1/N benchmark. All optimizers are
long-only.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import netstructure
from .dependence import DependenceKind, DependenceMatrix, estimate
from .errors import NetfolioError
from .netstructure import ClusteringProfile, InterconnMatrices, build_matrices, integrated_clustering
from .qp_solver import QpProblem, QpSolution, solve

SUPPORT_THRESHOLD = 0.01  # reporting cutoff for "invested" assets


class Strategy(str, Enum):
    GMV = "gmv"
    PNA = "pna"
    KNA = "kna"
    TNA = "tna"
    EW = "ew"


NETWORK_KINDS = {
    Strategy.PNA: DependenceKind.PEARSON,
    Strategy.KNA: DependenceKind.KENDALL,
    Strategy.TNA: DependenceKind.LOWER_TAIL,
}
STRATEGY_FOR_KIND = {kind: strat for strat, kind in NETWORK_KINDS.items()}


@dataclass(frozen=True)
class Portfolio:
    strategy: Strategy
    window_id: int
    weights: np.ndarray
    support_size: int

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if abs(float(w.sum()) - 1.0) > 1e-8:
            raise NetfolioError(f"weights sum to {w.sum()}, not 1")
        if w.min() < -1e-10 or w.max() > 1.0 + 1e-10:
            raise NetfolioError("weights outside [0, 1]")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)


def _portfolio(strategy: Strategy, window_id: int, weights: np.ndarray,
               support_threshold: float = SUPPORT_THRESHOLD) -> Portfolio:
    support = int((weights > support_threshold).sum())
    return Portfolio(strategy=strategy, window_id=window_id,
                     weights=weights, support_size=support)


@dataclass(frozen=True)
class NetworkResult:
    """Everything the network pipeline produces for one window."""

    portfolio: Portfolio
    dependence: DependenceMatrix
    profile: ClusteringProfile
    matrices: InterconnMatrices
    solution: QpSolution


def gmv_portfolio(window_returns: np.ndarray, window_id: int = 0) -> Portfolio:
    """Long-only global minimum variance weights for one window."""
    omega = netstructure.omega_matrix(window_returns)
    solution = solve(QpProblem(omega))
    return _portfolio(Strategy.GMV, window_id, solution.weights)


def network_analysis(window_returns: np.ndarray, kind: DependenceKind,
                     q: float = 0.05, grid_size: int = 201,
                     window_id: int = 0) -> NetworkResult:
    """Full network pipeline for one window, keeping the intermediates."""
    dep = estimate(kind, window_returns, q=q)
    profile = integrated_clustering(dep, grid_size=grid_size)
    matrices = build_matrices(window_returns, profile)
    solution = solve(QpProblem(matrices.h_matrix))
    portfolio = _portfolio(STRATEGY_FOR_KIND[kind], window_id, solution.weights)
    return NetworkResult(portfolio=portfolio, dependence=dep, profile=profile,
                         matrices=matrices, solution=solution)


def network_portfolio(window_returns: np.ndarray, kind: DependenceKind,
                      q: float = 0.05, grid_size: int = 201,
                      window_id: int = 0) -> Portfolio:
    """PNA/KNA/TNA weights for one window."""
    return network_analysis(window_returns, kind, q=q, grid_size=grid_size,
                            window_id=window_id).portfolio


def ew_portfolio(n_assets: int, window_id: int = 0) -> Portfolio:
    """The 1/N portfolio."""
    if n_assets < 1:
        raise NetfolioError(f"need at least one asset, got {n_assets}")
    return _portfolio(Strategy.EW, window_id, np.full(n_assets, 1.0 / n_assets))
