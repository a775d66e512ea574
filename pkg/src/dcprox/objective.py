"""Structural interfaces for difference-of-convex composite objectives."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np


class DcSmooth(ABC):
    """Smooth term f = f1 - f2 with both parts convex and grad f1 Lipschitz.

    Implementations must be pure: repeated evaluation at the same point gives
    identical results, so instances can be shared across benchmark workers.
    The default f2 is zero (purely convex loss).
    """

    #: optional known bound on the Lipschitz constant of grad f1
    lipschitz_f1 = None

    @abstractmethod
    def value_f1(self, x) -> float: ...

    @abstractmethod
    def grad_f1(self, x) -> np.ndarray: ...

    def value_f2(self, x) -> float:
        return 0.0

    def grad_f2(self, x) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=np.float64))

    def gradients(self, x):
        """(grad f1, grad f2); override when the two parts share work."""
        return self.grad_f1(x), self.grad_f2(x)

    def value(self, x) -> float:
        return self.value_f1(x) - self.value_f2(x)


class DcNonsmooth(ABC):
    """Nonsmooth regularizer h = h1 - h2 with both parts convex.

    `subgrad_h2` must be a deterministic selector from the subdifferential;
    `prox_h1_scalar` is the proximal map of h1 under the scalar metric
    (1/step) * I, the only prox a regularizer has to supply. `prox_full`
    (the proximal map of the complete, possibly nonconvex h) is needed only
    by solvers that consume it directly.
    """

    @abstractmethod
    def value_h1(self, x) -> float: ...

    def value_h2(self, x) -> float:
        return 0.0

    def subgrad_h2(self, x) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=np.float64))

    @abstractmethod
    def prox_h1_scalar(self, u, step) -> np.ndarray: ...

    def prox_full(self, u, step) -> np.ndarray:
        raise NotImplementedError(f"{type(self).__name__} has no full prox")

    def h_values(self, x):
        """Both convex parts as a pair (h1, h2)."""
        return self.value_h1(x), self.value_h2(x)

    def value(self, x) -> float:
        return self.value_h1(x) - self.value_h2(x)


@dataclass(frozen=True)
class CompositeObjective:
    """F(x) = f1(x) - f2(x) + h1(x) - h2(x) over R^dim."""

    smooth: DcSmooth
    nonsmooth: DcNonsmooth
    dim: int

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.dim},)")
        return x

    def value(self, x) -> float:
        x = self.check_point(x)
        val = (self.smooth.value_f1(x) - self.smooth.value_f2(x)
               + self.nonsmooth.value_h1(x) - self.nonsmooth.value_h2(x))
        if not np.isfinite(val):
            raise ValueError(f"non-finite objective value {val!r}")
        return float(val)

    def smooth_value(self, x) -> float:
        x = self.check_point(x)
        return self.smooth.value_f1(x) - self.smooth.value_f2(x)

    def smooth_gradients(self, x):
        """Return (grad f1, grad f2), both finite."""
        x = self.check_point(x)
        g1, g2 = self.smooth.gradients(x)
        if not (np.all(np.isfinite(g1)) and np.all(np.isfinite(g2))):
            raise ValueError("non-finite gradient")
        return g1, g2

    def h1(self, x) -> float:
        return self.nonsmooth.value_h1(self.check_point(x))

    def subgrad_h2(self, x) -> np.ndarray:
        return self.nonsmooth.subgrad_h2(self.check_point(x))
