"""Pairwise dependence matrices: Pearson, Kendall tau, lower tail dependence.

Each estimator maps a T x N window of returns to a symmetric N x N edge
weight matrix with a zero diagonal. Off-diagonal sums are exact integer
counts accumulated in float64, so results do not depend on evaluation
order.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Sequence

import numpy as np

from .errors import DependenceError


class DependenceKind(str, Enum):
    PEARSON = "pearson"
    KENDALL = "kendall"
    LOWER_TAIL = "lower_tail"


VALUE_RANGES = {
    DependenceKind.PEARSON: (-1.0, 1.0),
    DependenceKind.KENDALL: (-1.0, 1.0),
    DependenceKind.LOWER_TAIL: (0.0, 1.0),
}

# Kendall sign tensors are materialised in full below this element count,
# chunked row-wise above it (fixed chunk size keeps results deterministic).
_KENDALL_BULK_LIMIT = 40_000_000


@dataclass(frozen=True)
class DependenceMatrix:
    """Symmetric edge-weight matrix W for one dependence kind."""

    kind: DependenceKind
    weights: np.ndarray
    value_range: tuple[float, float]

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DependenceError("weights must be square")
        if not np.array_equal(w, w.T):
            raise DependenceError("weights must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise DependenceError("diagonal must be exactly zero")
        lo, hi = self.value_range
        off = w[~np.eye(w.shape[0], dtype=bool)]
        if off.size and (off.min() < lo or off.max() > hi):
            raise DependenceError(f"entries outside [{lo}, {hi}]")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_assets(self) -> int:
        return self.weights.shape[0]


def _as_window(returns: np.ndarray, min_obs: int = 2) -> np.ndarray:
    r = np.ascontiguousarray(returns, dtype=np.float64)
    if r.ndim != 2:
        raise DependenceError("window must be a T x N matrix")
    if r.shape[0] < min_obs:
        raise DependenceError(f"window has {r.shape[0]} rows, need at least {min_obs}")
    return r


def pearson_matrix(window_returns: np.ndarray, assets: Sequence[str] | None = None) -> DependenceMatrix:
    """Sample Pearson correlations as edge weights."""
    r = _as_window(window_returns)
    var = r.var(axis=0, ddof=1)
    bad = np.nonzero(var <= 0.0)[0]
    if bad.size:
        name = assets[bad[0]] if assets is not None else f"column {bad[0]}"
        raise DependenceError(f"zero-variance asset: {name}")
    w = np.corrcoef(r, rowvar=False)
    w = np.clip((w + w.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(w, 0.0)
    return DependenceMatrix(DependenceKind.PEARSON, w, VALUE_RANGES[DependenceKind.PEARSON])


def _kendall_gram(r: np.ndarray) -> np.ndarray:
    """Gram matrix of the T*T sign tensors, one column per asset."""
    t, n = r.shape
    if t * t * n <= _KENDALL_BULK_LIMIT:
        signs = np.sign(r[:, None, :] - r[None, :, :]).reshape(t * t, n)
        return signs.T @ signs
    gram = np.zeros((n, n))
    chunk = max(1, _KENDALL_BULK_LIMIT // (t * n))
    for start in range(0, t, chunk):
        block = np.sign(r[start:start + chunk, None, :] - r[None, :, :])
        flat = block.reshape(-1, n)
        gram += flat.T @ flat
    return gram


def kendall_matrix(window_returns: np.ndarray) -> DependenceMatrix:
    """Kendall tau-a: signed pair agreement over all ordered pairs.

    tau_ij = sum_{h != k} sgn(r_ih - r_ik) * sgn(r_jh - r_jk) / (T(T-1));
    ties contribute zero through sgn(0) = 0, with no tie correction.
    """
    r = _as_window(window_returns)
    t = r.shape[0]
    gram = _kendall_gram(r)
    w = (gram + gram.T) / (2.0 * t * (t - 1))
    w = np.clip(w, -1.0, 1.0)
    np.fill_diagonal(w, 0.0)
    return DependenceMatrix(DependenceKind.KENDALL, w, VALUE_RANGES[DependenceKind.KENDALL])


def lower_tail_matrix(window_returns: np.ndarray, q: float = 0.05) -> DependenceMatrix:
    """Empirical lower tail dependence at quantile level q.

    With k = ceil(qT), the weight is the fraction of the k lowest-ranked
    observations of one asset that are also among the k lowest of the
    other. Ranks are ascending with ties broken by time index.
    """
    if not 0.0 < q < 0.5:
        raise DependenceError(f"tail level q must be in (0, 0.5), got {q}")
    r = _as_window(window_returns, min_obs=20)
    t, n = r.shape
    k = int(math.ceil(q * t - 1e-9))
    # Stable argsort: among tied values the earlier observation ranks lower.
    order = np.argsort(r, axis=0, kind="stable")
    in_tail = np.zeros((t, n))
    np.put_along_axis(in_tail, order[:k], 1.0, axis=0)
    counts = in_tail.T @ in_tail
    w = np.clip((counts + counts.T) / (2.0 * k), 0.0, 1.0)
    np.fill_diagonal(w, 0.0)
    return DependenceMatrix(DependenceKind.LOWER_TAIL, w, VALUE_RANGES[DependenceKind.LOWER_TAIL])


def estimate(kind: DependenceKind, window_returns: np.ndarray, q: float = 0.05,
             assets: Sequence[str] | None = None) -> DependenceMatrix:
    """Dispatch to the estimator for ``kind``."""
    if kind == DependenceKind.PEARSON:
        return pearson_matrix(window_returns, assets=assets)
    if kind == DependenceKind.KENDALL:
        return kendall_matrix(window_returns)
    if kind == DependenceKind.LOWER_TAIL:
        return lower_tail_matrix(window_returns, q=q)
    raise DependenceError(f"unknown dependence kind: {kind!r}")


def render_matrix_csv(dep: DependenceMatrix, assets: Sequence[str], delimiter: str = ",") -> str:
    """Square delimited-text matrix with an asset-id header, for graph tools."""
    if len(assets) != dep.n_assets:
        raise DependenceError(f"{len(assets)} asset ids for {dep.n_assets} columns")
    out = io.StringIO()
    out.write(delimiter.join(assets) + "\n")
    for row in dep.weights:
        out.write(delimiter.join(repr(float(x)) for x in row) + "\n")
    return out.getvalue()


def export_matrix(dep: DependenceMatrix, assets: Sequence[str], dest: str | IO[str],
                  delimiter: str = ",") -> None:
    if isinstance(dest, str) or hasattr(dest, "__fspath__"):
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            fh.write(render_matrix_csv(dep, assets, delimiter))
        return
    dest.write(render_matrix_csv(dep, assets, delimiter))
