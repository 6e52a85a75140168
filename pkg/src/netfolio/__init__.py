"""Network-based portfolio selection.

Dependence networks (Pearson, Kendall tau, lower tail dependence),
threshold-averaged clustering coefficients, the interconnectedness-matrix
allocation problem, and a rolling-window backtest with GMV/EW baselines.
"""

__version__ = "0.1.0"

from .backtest import BacktestReport, herfindahl, run_backtest, turnover
from .dependence import (
    DependenceKind,
    DependenceMatrix,
    kendall_matrix,
    lower_tail_matrix,
    pearson_matrix,
)
from .errors import (
    BacktestError,
    ConfigError,
    DataError,
    DependenceError,
    MetricsError,
    NetfolioError,
    QpConvergenceError,
    QpError,
)
from .market_data import ReturnPanel, WindowPlan, load_panel, plan_windows
from .metrics import PerformanceSummary, information_ratio, omega, sharpe, summarize
from .netstructure import (
    ClusteringProfile,
    InterconnMatrices,
    ThresholdAdjacency,
    build_matrices,
    integrated_clustering,
    local_clustering,
    threshold_adjacency,
)
from .qp_solver import QpProblem, QpSolution, solve, solve_closed_form
from .strategies import (
    Portfolio,
    Strategy,
    ew_portfolio,
    gmv_portfolio,
    network_portfolio,
)
from .synthetic import synthetic_panel
