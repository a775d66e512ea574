"""Limited-memory BFGS metric for the quadratic model of the convex loss part."""

from __future__ import annotations

import numpy as np


class LbfgsMetric:
    """Positive-definite metric built from curvature pairs (s, y).

    Stores the direct (non-inverse) approximation: what the direction solver
    needs is products H @ v, never H^{-1} @ v. The base matrix is
    ``gamma * I`` with gamma = y'y / s'y of the newest accepted pair, clamped
    to [scaling_floor, scaling_cap], and pairs with too little curvature are
    skipped.

    Rank-two subtractions can still push the spectrum of the textbook
    recursion arbitrarily close to zero when the loss curvature degenerates
    (saturated logistic margins), so the operator actually applied is the
    recursion plus ``spectrum_floor * I`` whenever pairs are stored. That
    keeps the metric uniformly positive definite, which the line-search and
    stationarity guarantees require; with healthy curvature the floor is
    orders of magnitude below the true spectrum. With no stored pairs the
    operator is exactly ``gamma * I``.

    Mutable during a solve and owned by a single solver run.
    """

    def __init__(self, dim, memory=5, curvature_eps=1e-10,
                 scaling_floor=1e-6, scaling_cap=1e8, initial_scaling=1.0,
                 spectrum_floor=1e-6):
        if memory < 1:
            raise ValueError("memory must be >= 1")
        if initial_scaling <= 0:
            raise ValueError("initial scaling must be positive")
        self.dim = int(dim)
        self.memory = int(memory)
        self.curvature_eps = float(curvature_eps)
        self.scaling_floor = float(scaling_floor)
        self.scaling_cap = float(scaling_cap)
        self.spectrum_floor = float(spectrum_floor)
        self.gamma = float(initial_scaling)
        self._pairs: list = []    # (s, y, s'y), oldest first
        self._basis = None        # stacked rank-two update directions
        self._weights = None
        self._eigen_floor = None

    @property
    def n_pairs(self) -> int:
        return len(self._pairs)

    def update(self, s, y) -> bool:
        """Offer a curvature pair; returns False when it is rejected.

        Accepted pairs evict the oldest beyond `memory` and reset the base
        scaling to the clamped y'y / s'y.
        """
        s = np.asarray(s, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if s.shape != (self.dim,) or y.shape != (self.dim,):
            raise ValueError("curvature pair has wrong dimension")
        sy = float(s @ y)
        if sy <= self.curvature_eps * np.linalg.norm(s) * np.linalg.norm(y) or sy <= 0.0:
            return False
        self._pairs.append((s.copy(), y.copy(), sy))
        if len(self._pairs) > self.memory:
            self._pairs.pop(0)
        yy = float(y @ y)
        self.gamma = float(np.clip(yy / sy, self.scaling_floor, self.scaling_cap))
        self._basis = None
        return True

    def _rebuild(self):
        """Recompute the stacked rank-two terms and the spectrum lower bound.

        Each stored pair contributes + y y'/(s'y) - (B s)(B s)'/(s' B s) to
        the recursion started at gamma * I. The spectrum bound follows an
        upper bound on the inverse recursion's largest eigenvalue through the
        dual update formula, so it never overstates the true smallest
        eigenvalue; the explicit identity floor is then added on top.
        """
        rows = []
        weights = []

        def apply_partial(v):
            out = self.gamma * v
            for row, w in zip(rows, weights):
                out = out + w * (row @ v) * row
            return out

        inv_top = 1.0 / self.gamma
        for s, y, sy in self._pairs:
            c = apply_partial(s)
            sc = float(s @ c)
            if sc <= 0.0:
                continue
            rows.append(y)
            weights.append(1.0 / sy)
            rows.append(c)
            weights.append(-1.0 / sc)
            growth = 1.0 + np.linalg.norm(s) * np.linalg.norm(y) / sy
            inv_top = growth * growth * inv_top + float(s @ s) / sy
        if rows:
            self._basis = np.vstack(rows)
            self._weights = np.asarray(weights)
            self._eigen_floor = 1.0 / inv_top + self.spectrum_floor
        else:
            self._basis = np.empty((0, self.dim))
            self._weights = np.empty(0)
            self._eigen_floor = self.gamma
        return self._basis

    def apply(self, v) -> np.ndarray:
        """Product H @ v; exactly symmetric in its two arguments."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dim,):
            raise ValueError("vector has wrong dimension")
        if self._basis is None:
            self._rebuild()
        if self._basis.shape[0] == 0:
            return self.gamma * v
        out = (self.gamma + self.spectrum_floor) * v
        return out + self._basis.T @ (self._weights * (self._basis @ v))

    def smallest_eigen_lower_bound(self) -> float:
        """Conservative positive lower bound on the smallest eigenvalue."""
        if self._basis is None:
            self._rebuild()
        return float(self._eigen_floor)
