"""Network quantities derived from a dependence matrix.

A dependence matrix induces a family of threshold graphs A_s (keep edges
with weight >= s). Watts-Strogatz local clustering is evaluated on every
graph of a uniform threshold grid and averaged over the measure's value
range, giving each asset an integrated coefficient in [0, 1]. Those
coefficients define the interconnectedness matrix C and the optimization
matrix H used in place of the normalized covariance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dependence import DependenceMatrix
from .errors import DependenceError

# Threshold grids are evaluated in batches capped at this many matrix
# elements; fixed batch boundaries keep the accumulation deterministic.
_BATCH_ELEMENTS = 4_000_000


@dataclass(frozen=True)
class ThresholdAdjacency:
    """Binary graph keeping edges with dependence weight >= threshold."""

    threshold: float
    adjacency: np.ndarray  # N x N, 0/1 float64, zero diagonal

    def __post_init__(self):
        a = np.ascontiguousarray(self.adjacency, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DependenceError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise DependenceError("adjacency must be symmetric")
        if not np.all((a == 0.0) | (a == 1.0)):
            raise DependenceError("adjacency must be binary")
        if np.any(np.diag(a) != 0.0):
            raise DependenceError("adjacency diagonal must be zero")
        a.setflags(write=False)
        object.__setattr__(self, "adjacency", a)


@dataclass(frozen=True)
class ClusteringProfile:
    """Integrated clustering coefficients plus the per-threshold diagnostics."""

    per_asset: np.ndarray      # N, in [0, 1]
    grid: np.ndarray           # ordered thresholds
    per_threshold: np.ndarray  # grid_size x N

    def __post_init__(self):
        c = np.ascontiguousarray(self.per_asset, dtype=np.float64)
        if c.size == 0 or c.min() < 0.0 or c.max() > 1.0:
            raise DependenceError("integrated coefficients must lie in [0, 1]")
        c.setflags(write=False)
        object.__setattr__(self, "per_asset", c)


@dataclass(frozen=True)
class InterconnMatrices:
    """Window matrices for the allocation problems.

    delta holds the diagonal entries s_i = sigma_i / sqrt(sum_j sigma_j^2),
    so sum(delta**2) == 1. omega is the covariance normalized by total
    variance; h_matrix is diag(delta) @ c_matrix @ diag(delta).
    """

    delta: np.ndarray     # N diagonal entries of the Delta matrix
    c_matrix: np.ndarray  # C_i*C_j off-diagonal, ones on the diagonal
    h_matrix: np.ndarray
    omega: np.ndarray
    sigma: np.ndarray     # sample covariance

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.sigma)


def threshold_adjacency(dep: DependenceMatrix, s: float) -> ThresholdAdjacency:
    """Binary adjacency with a_ij = 1 iff w_ij >= s (i != j)."""
    lo, hi = dep.value_range
    if not lo <= s <= hi:
        raise DependenceError(f"threshold {s} outside value range [{lo}, {hi}]")
    a = (dep.weights >= s).astype(np.float64)
    np.fill_diagonal(a, 0.0)
    return ThresholdAdjacency(threshold=s, adjacency=a)


def _clustering_from_adjacency(adj: np.ndarray) -> np.ndarray:
    """Watts-Strogatz local clustering for one graph or a (..., N, N) stack.

    C_i = 2*t_i / (k_i*(k_i - 1)) with t_i the triangles through i;
    nodes of degree < 2 get 0. All counts are exact integers in float64.
    """
    k = adj.sum(axis=-1)
    two_triangles = ((adj @ adj) * adj).sum(axis=-1)  # walks i->x->j over edges (i,j)
    denom = k * (k - 1.0)
    out = np.zeros_like(k)
    np.divide(two_triangles, denom, out=out, where=denom > 0.0)
    return out


def local_clustering(adj: ThresholdAdjacency) -> np.ndarray:
    """Per-node clustering coefficients of a threshold graph."""
    return _clustering_from_adjacency(adj.adjacency)


def integrated_clustering(dep: DependenceMatrix, grid_size: int = 201) -> ClusteringProfile:
    """Average local clustering over a uniform threshold grid.

    The composite trapezoid integral of C_i(A_s) over the measure's value
    range is divided by the range length, which keeps every coefficient
    in [0, 1]; results are clamped against rounding.
    """
    if grid_size < 2:
        raise DependenceError(f"grid_size must be >= 2, got {grid_size}")
    lo, hi = dep.value_range
    n = dep.n_assets
    grid = np.linspace(lo, hi, grid_size)

    per_threshold = np.empty((grid_size, n))
    batch = max(1, _BATCH_ELEMENTS // (n * n))
    w = dep.weights
    for start in range(0, grid_size, batch):
        thresholds = grid[start:start + batch]
        stack = (w[None, :, :] >= thresholds[:, None, None]).astype(np.float64)
        idx = np.arange(n)
        stack[:, idx, idx] = 0.0
        per_threshold[start:start + batch] = _clustering_from_adjacency(stack)

    weights = np.full(grid_size, hi - lo)
    weights[0] = weights[-1] = (hi - lo) / 2.0
    weights /= grid_size - 1  # trapezoid cell width
    integral = weights @ per_threshold
    per_asset = np.clip(integral / (hi - lo), 0.0, 1.0)
    return ClusteringProfile(per_asset=per_asset, grid=grid, per_threshold=per_threshold)


def _covariance_pieces(window_returns: np.ndarray):
    r = np.ascontiguousarray(window_returns, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] < 2:
        raise DependenceError("window must be a T x N matrix with T >= 2")
    sigma = np.atleast_2d(np.cov(r, rowvar=False, ddof=1))
    var = np.diag(sigma).copy()
    bad = np.nonzero(var <= 0.0)[0]
    if bad.size:
        raise DependenceError(f"zero-variance asset: column {bad[0]}")
    total = var.sum()
    delta = np.sqrt(var / total)
    omega = sigma / total
    return sigma, delta, omega


def omega_matrix(window_returns: np.ndarray) -> np.ndarray:
    """Covariance normalized by total variance (the GMV objective matrix)."""
    return _covariance_pieces(window_returns)[2]


def build_matrices(window_returns: np.ndarray, profile: ClusteringProfile) -> InterconnMatrices:
    """Sample covariance plus the Omega, Delta, C and H matrices."""
    sigma, delta, omega = _covariance_pieces(window_returns)
    n = sigma.shape[0]
    if profile.per_asset.shape[0] != n:
        raise DependenceError(
            f"profile covers {profile.per_asset.shape[0]} assets, window has {n}"
        )
    ci = profile.per_asset
    c_matrix = np.outer(ci, ci)
    np.fill_diagonal(c_matrix, 1.0)
    h = c_matrix * np.outer(delta, delta)
    h = (h + h.T) / 2.0  # guard rounding asymmetry
    return InterconnMatrices(delta=delta, c_matrix=c_matrix, h_matrix=h,
                             omega=omega, sigma=sigma)
