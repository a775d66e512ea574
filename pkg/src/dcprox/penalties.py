"""Nonsmooth DC penalties: plain l1 and the capped-l1."""

from __future__ import annotations

import numpy as np

from .objective import DcNonsmooth


def soft_threshold(u, t):
    """Coordinate minimizer of (y-u)^2/2 + t|y|: sign(u) * max(|u| - t, 0)."""
    u = np.asarray(u, dtype=np.float64)
    return np.sign(u) * np.maximum(np.abs(u) - t, 0.0)


def _as_weight(lam):
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise ValueError("penalty weight must be finite and nonnegative")
    return lam if lam.ndim else float(lam)


class L1Penalty(DcNonsmooth):
    """h(x) = sum_i lam_i |x_i|, the convex special case (h2 = 0).

    `lam` is a scalar or a per-coordinate array; a zero entry leaves that
    coordinate unpenalized (used for intercept columns).
    """

    def __init__(self, lam):
        self.lam = _as_weight(lam)

    def value_h1(self, x) -> float:
        return float(np.sum(self.lam * np.abs(x)))

    def prox_h1_scalar(self, u, step) -> np.ndarray:
        if step <= 0:
            raise ValueError("prox step must be positive")
        return soft_threshold(u, step * self.lam)

    # h2 = 0, so h and h1 share their prox
    prox_full = prox_h1_scalar


class CappedL1Penalty(DcNonsmooth):
    """Coordinate-wise capped-l1: h(x) = sum_i lam_i min(|x_i|, theta).

    DC split: h1 = sum lam|x_i|, h2 = sum lam (|x_i| - theta)_+, so h stays
    between 0 and theta * sum(lam).
    """

    def __init__(self, lam, theta):
        self.lam = _as_weight(lam)
        if not np.isscalar(theta) or theta <= 0:
            raise ValueError("theta must be a positive scalar")
        self.theta = float(theta)

    def value_h1(self, x) -> float:
        return float(np.sum(self.lam * np.abs(x)))

    def value_h2(self, x) -> float:
        return float(np.sum(self.lam * np.maximum(np.abs(x) - self.theta, 0.0)))

    def subgrad_h2(self, x) -> np.ndarray:
        """Minimum-norm coordinate selector: lam*sign(x_i) where |x_i| > theta,
        zero otherwise (ties at |x_i| = theta resolve to zero)."""
        x = np.asarray(x, dtype=np.float64)
        return np.where(np.abs(x) > self.theta, self.lam * np.sign(x), 0.0)

    def prox_h1_scalar(self, u, step) -> np.ndarray:
        if step <= 0:
            raise ValueError("prox step must be positive")
        return soft_threshold(u, step * self.lam)

    def prox_full(self, u, step) -> np.ndarray:
        """Exact coordinate minimizer of (y-u)^2/(2 step) + lam*min(|y|, theta).

        Two candidate branches: stay in the capped region (|y| >= theta, where
        the penalty is constant) or soft-threshold into [0, theta]. Ties pick
        the smaller-magnitude candidate.
        """
        if step <= 0:
            raise ValueError("prox step must be positive")
        u = np.asarray(u, dtype=np.float64)
        mag, sgn = np.abs(u), np.sign(u)
        capped = sgn * np.maximum(mag, self.theta)
        shrunk = sgn * np.minimum(self.theta, np.maximum(mag - step * self.lam, 0.0))

        def branch_obj(y):
            return (y - u) ** 2 / (2.0 * step) + self.lam * np.minimum(np.abs(y), self.theta)

        return np.where(branch_obj(shrunk) <= branch_obj(capped), shrunk, capped)
