"""Convex quadratic allocation: minimize x' M x over the long-only simplex.

The solver is an active-set iteration in the Lawson-Hanson style: solve
the equality-constrained problem on the current support, take blocked
steps when a coordinate would go negative, and grow the support while
dual feasibility is violated. Correctness is certified post hoc by an
explicit KKT residual rather than by trusting the algorithm; the
closed-form short-selling solution x = M^-1 e / (e' M^-1 e) is exposed
for cross-validation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QpConvergenceError, QpError

SYMMETRY_TOL = 1e-10
PSD_TOL = -1e-8
KKT_TOL = 1e-6
SNAP_TOL = 1e-10


@dataclass(frozen=True)
class QpProblem:
    """Symmetric positive-semidefinite objective matrix plus the short-sale flag."""

    matrix: np.ndarray
    allow_short: bool = False

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise QpError("matrix must be square")
        if m.shape[0] < 1:
            raise QpError("matrix must be at least 1 x 1")
        if not np.all(np.isfinite(m)):
            raise QpError("matrix contains non-finite entries")
        asym = float(np.abs(m - m.T).max())
        if asym > SYMMETRY_TOL:
            raise QpError(f"matrix asymmetric by {asym:.3e} (tolerance {SYMMETRY_TOL})")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < PSD_TOL:
            raise QpError(f"matrix indefinite: minimum eigenvalue {min_eig:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class QpSolution:
    weights: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int


def kkt_residual(matrix: np.ndarray, x: np.ndarray) -> float:
    """Max violation of the simplex-QP first-order conditions at x.

    Uses lambda = x'(2Mx) as the multiplier estimate; covers the budget,
    the box, complementary stationarity and dual feasibility.
    """
    g = 2.0 * (matrix @ x)
    lam = float(x @ g)
    r = abs(float(x.sum()) - 1.0)
    r = max(r, float(np.max(-x)), float(np.max(x - 1.0)))
    r = max(r, float(np.max(np.abs(x * (g - lam)))))
    r = max(r, max(0.0, float(np.max(lam - g))))
    return r


def _reduced_kkt_solve(m_ss: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimize z' M_ss z subject to sum(z) = 1, signs unconstrained."""
    size = m_ss.shape[0]
    kkt = np.zeros((size + 1, size + 1))
    kkt[:size, :size] = 2.0 * m_ss
    kkt[:size, size] = -1.0
    kkt[size, :size] = 1.0
    rhs = np.zeros(size + 1)
    rhs[size] = 1.0
    try:
        sol = np.linalg.solve(kkt, rhs)
        if not np.all(np.isfinite(sol)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return sol[:size], float(sol[size])


def _finalize(matrix: np.ndarray, x: np.ndarray, iterations: int) -> QpSolution:
    """Snap dust weights to zero, renormalize, and certify the result."""
    x = np.where(x < SNAP_TOL, 0.0, x)
    total = x.sum()
    if total <= 0.0:
        raise QpConvergenceError("all weights snapped to zero", x, np.inf, iterations)
    x = x / total
    residual = kkt_residual(matrix, x)
    if residual > KKT_TOL:
        raise QpConvergenceError(
            f"KKT residual {residual:.3e} exceeds tolerance {KKT_TOL} "
            f"after {iterations} iterations",
            x, residual, iterations,
        )
    return QpSolution(weights=x, objective=float(x @ matrix @ x),
                      kkt_residual=residual, iterations=iterations)


def solve(problem: QpProblem, max_iter: int | None = None) -> QpSolution:
    """KKT point of min x' M x subject to sum(x) = 1, 0 <= x <= 1.

    Deterministic for fixed inputs; for positive-definite M the result is
    the unique global minimizer. Raises QpConvergenceError (carrying the
    best iterate) if the iteration budget runs out.
    """
    if problem.allow_short:
        return solve_closed_form(problem)
    m = problem.matrix
    n = problem.size
    if n == 1:
        return QpSolution(weights=np.ones(1), objective=float(m[0, 0]),
                          kkt_residual=0.0, iterations=0)
    if max_iter is None:
        max_iter = 10 * n * n

    x = np.full(n, 1.0 / n)
    support = np.ones(n, dtype=bool)
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        idx = np.nonzero(support)[0]
        z_s, _ = _reduced_kkt_solve(m[np.ix_(idx, idx)])

        if z_s.min() >= -1e-12:
            x = np.zeros(n)
            x[idx] = np.maximum(z_s, 0.0)
            g = 2.0 * (m @ x)
            lam = float(x @ g)
            scale = max(1.0, float(np.abs(g).max()))
            off = np.nonzero(~support)[0]
            if off.size == 0:
                return _finalize(m, x, iterations)
            viol = lam - g[off]
            worst = int(np.argmax(viol))
            if viol[worst] <= 1e-10 * scale:
                return _finalize(m, x, iterations)
            support[off[worst]] = True
        else:
            z = np.zeros(n)
            z[idx] = z_s
            blocking = idx[z_s < -1e-12]
            ratios = x[blocking] / (x[blocking] - z[blocking])
            step = int(np.argmin(ratios))
            alpha = float(ratios[step])
            x = x + alpha * (z - x)
            support[blocking[step]] = False
            support &= x > 1e-13
            x[~support] = 0.0

    residual = kkt_residual(m, x)
    raise QpConvergenceError(
        f"no KKT point within {max_iter} iterations (residual {residual:.3e})",
        x, residual, iterations,
    )


def solve_closed_form(problem: QpProblem) -> QpSolution:
    """Short-selling optimum x = M^-1 e / (e' M^-1 e) for positive-definite M."""
    m = problem.matrix
    eigs = np.linalg.eigvalsh(m)
    if eigs[0] <= 1e-12:
        cond = np.inf if eigs[0] <= 0.0 else float(eigs[-1] / eigs[0])
        raise QpError(
            f"closed form needs a positive-definite matrix: "
            f"minimum eigenvalue {eigs[0]:.3e}, condition estimate {cond:.3e}"
        )
    ones = np.ones(problem.size)
    y = np.linalg.solve(m, ones)
    x = y / y.sum()
    g = 2.0 * (m @ x)
    lam = float(x @ g)
    residual = max(abs(float(x.sum()) - 1.0), float(np.max(np.abs(g - lam))))
    return QpSolution(weights=x, objective=float(x @ m @ x),
                      kkt_residual=residual, iterations=0)
