"""Shared oracles and tiny objectives used across the test suite.

Every oracle here is independent of the code path it checks: finite
differences for gradients, dense matrix algebra for the limited-memory
metric, long-run small-step proximal gradient plus exact sign-pattern
enumeration for the direction subproblem, and 1-D grid search for proximal
maps.
"""

from __future__ import annotations

import itertools

import numba
import numpy as np

from dcprox.objective import DcSmooth


class DenseMetric:
    """Explicit PD matrix with the operator interface the solvers expect."""

    def __init__(self, H):
        self.H = np.asarray(H, dtype=np.float64)
        self.dim = self.H.shape[0]

    def apply(self, v):
        return self.H @ np.asarray(v, dtype=np.float64)

    def smallest_eigen_lower_bound(self):
        return float(np.linalg.eigvalsh(self.H)[0])


class QuadraticLoss(DcSmooth):
    """f1 = 0.5 (x-c)' A (x-c) with A symmetric PSD (identity by default)."""

    def __init__(self, center, matrix=None):
        self.center = np.asarray(center, dtype=np.float64)
        self.matrix = None if matrix is None else np.asarray(matrix, dtype=np.float64)

    def value_f1(self, x):
        r = np.asarray(x, dtype=np.float64) - self.center
        if self.matrix is None:
            return 0.5 * float(r @ r)
        return 0.5 * float(r @ self.matrix @ r)

    def grad_f1(self, x):
        r = np.asarray(x, dtype=np.float64) - self.center
        return r.copy() if self.matrix is None else self.matrix @ r


class DcQuadraticLoss(DcSmooth):
    """f = f1 - f2 with two convex quadratics: f1 = 0.5 x'P x + b'x,
    f2 = 0.5 x'Q x (P, Q PSD). Used for DC-structure tests."""

    def __init__(self, P, b, Q):
        self.P = np.asarray(P, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.Q = np.asarray(Q, dtype=np.float64)

    def value_f1(self, x):
        x = np.asarray(x, dtype=np.float64)
        return 0.5 * float(x @ self.P @ x) + float(self.b @ x)

    def grad_f1(self, x):
        return self.P @ np.asarray(x, dtype=np.float64) + self.b

    def value_f2(self, x):
        x = np.asarray(x, dtype=np.float64)
        return 0.5 * float(x @ self.Q @ x)

    def grad_f2(self, x):
        return self.Q @ np.asarray(x, dtype=np.float64)


def finite_difference_gradient(fun, x, step=1e-5):
    """Central differences, the oracle for every analytic gradient."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (fun(x + e) - fun(x - e)) / (2.0 * step)
    return g


def relative_error(approx, exact):
    approx = np.asarray(approx, dtype=np.float64)
    exact = np.asarray(exact, dtype=np.float64)
    return np.linalg.norm(approx - exact) / max(np.linalg.norm(exact), 1e-30)


def dense_bfgs_oracle(dim, pairs, gamma, spectrum_floor=0.0):
    """Explicitly maintained direct BFGS matrix: start at gamma * I, apply
    the textbook rank-two update for each pair, then add the identity floor.
    Mirrors the documented operator definition of LbfgsMetric."""
    B = gamma * np.eye(dim)
    for s, y in pairs:
        s = np.asarray(s, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        c = B @ s
        B = B - np.outer(c, c) / float(s @ c) + np.outer(y, y) / float(s @ y)
    if spectrum_floor:
        B = B + spectrum_floor * np.eye(dim)
    return B


@numba.njit
def _pg_oracle_loop(H, c, lam, eta, max_iters, tol):
    d = H.shape[0]
    y = np.zeros(d)
    for _ in range(max_iters):
        g = H @ y + c
        moved = 0.0
        for i in range(d):
            u = y[i] - eta * g[i]
            ny = np.sign(u) * max(abs(u) - eta * lam, 0.0)
            moved = max(moved, abs(ny - y[i]))
            y[i] = ny
        if moved <= tol:
            break
    return y


def brute_force_prox_gradient(H, c, lam, max_iters=2_000_000, tol=1e-13):
    """Plain (unaccelerated) proximal gradient on 0.5 y'Hy + c'y + lam|y|_1
    from the origin, with the conservative fixed step 1/(2 ||H||_2), run until
    the sup-norm update stalls (1e-13 sits above float64 rounding noise at
    unit scale). The long-run brute-force oracle for the direction
    subproblem."""
    H = np.asarray(H, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    eta = 1.0 / (2.0 * np.linalg.norm(H, 2))
    return _pg_oracle_loop(H, c, float(lam), eta, max_iters, tol)


def exact_l1_quadratic_minimizer(H, c, lam):
    """Exact minimizer of 0.5 y'Hy + c'y + lam|y|_1 by enumerating all 3^d
    sign patterns and solving the stationarity system of each; feasible only
    for small d. Independent crosscheck for the proximal-gradient oracle."""
    H = np.asarray(H, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d = H.shape[0]
    best, best_val = None, np.inf
    for signs in itertools.product((-1.0, 0.0, 1.0), repeat=d):
        signs = np.array(signs)
        free = np.flatnonzero(signs != 0)
        zero = np.flatnonzero(signs == 0)
        y = np.zeros(d)
        if free.size:
            y[free] = np.linalg.solve(H[np.ix_(free, free)],
                                      -(c[free] + lam * signs[free]))
            if np.any(np.sign(y[free]) != signs[free]):
                continue
        if zero.size:
            slope = c[zero] + (H[np.ix_(zero, free)] @ y[free] if free.size else 0.0)
            if np.any(np.abs(slope) > lam + 1e-9):
                continue
        val = 0.5 * float(y @ H @ y) + float(c @ y) + lam * float(np.abs(y).sum())
        if val < best_val:
            best, best_val = y, val
    return best


def grid_search_scalar_prox(u, lam, theta, step, grid=1e-5):
    """Dense 1-D grid minimizer of (y-u)^2/(2 step) + lam * min(|y|, theta).
    The minimizer always lies between 0 and u, so the grid covers [0, u]."""
    lo, hi = (u, 0.0) if u < 0 else (0.0, u)
    ys = np.arange(lo, hi + grid, grid)
    vals = (ys - u) ** 2 / (2.0 * step) + lam * np.minimum(np.abs(ys), theta)
    return float(ys[np.argmin(vals)])


def grid_search_l1_prox(u, lam, step, grid=1e-6):
    """Dense 1-D grid minimizer of (y-u)^2/(2 step) + lam |y|."""
    lo, hi = (u, 0.0) if u < 0 else (0.0, u)
    ys = np.arange(lo, hi + grid, grid)
    vals = (ys - u) ** 2 / (2.0 * step) + lam * np.abs(ys)
    return float(ys[np.argmin(vals)])


def random_lbfgs_metric(dim, seed, n_updates=8, memory=5):
    """LbfgsMetric driven by random curvature pairs from a random convex
    quadratic, so tests exercise a realistically updated operator."""
    from dcprox.lbfgs import LbfgsMetric

    rng = np.random.default_rng(seed)
    A = rng.standard_normal((dim, dim))
    hess = A @ A.T / dim + 0.5 * np.eye(dim)
    metric = LbfgsMetric(dim, memory=memory)
    for _ in range(n_updates):
        s = rng.standard_normal(dim)
        metric.update(s, hess @ s)
    return metric
