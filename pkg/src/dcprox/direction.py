"""Search-direction subproblem: the metric-scaled proximal step computed by
forward-backward splitting with a difference-quotient Lipschitz estimate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class InnerConfig:
    max_iters: int = 500
    tol_floor: float = 1e-8
    tol_scale: float = 0.1
    lipschitz_safety: float = 1.1
    warm_start: bool = True
    probe_seed: int = 0

    def __post_init__(self):
        if self.tol_floor <= 0:
            raise ValueError("tol_floor must be positive")
        if not 0.0 < self.tol_scale < 1.0:
            raise ValueError("tol_scale must lie in (0, 1)")
        if self.lipschitz_safety < 1.0:
            raise ValueError("lipschitz_safety must be >= 1")


@dataclass
class InnerResult:
    z: np.ndarray          # subproblem minimizer; the direction is z - x_k
    iterations: int
    final_step: float
    residual: float        # last sup-norm iterate change
    converged: bool


def assemble_v(grad_f1, z_f2, z_h2) -> np.ndarray:
    """Model gradient at the expansion point: grad f1 minus both linearized
    concave-part (sub)gradients."""
    grad_f1 = np.asarray(grad_f1, dtype=np.float64)
    z_f2 = np.asarray(z_f2, dtype=np.float64)
    z_h2 = np.asarray(z_h2, dtype=np.float64)
    if grad_f1.shape != z_f2.shape or grad_f1.shape != z_h2.shape:
        raise ValueError("gradient pieces have mismatched shapes")
    return grad_f1 - z_f2 - z_h2


def adaptive_tolerance(outer_iter, last_step_norm, cfg: InnerConfig) -> float:
    """Inner tolerance schedule: loose early, tightening with the previous
    outer direction norm, never below the floor."""
    if last_step_norm < 0:
        raise ValueError("last_step_norm must be nonnegative")
    if outer_iter == 0:
        return max(cfg.tol_floor, 1e-3)
    return max(cfg.tol_floor, cfg.tol_scale * last_step_norm)


def solve_direction(metric, x_k, v_k, pen, cfg: InnerConfig, tol, z0=None,
                    callback=None) -> InnerResult:
    """Approximately minimize 0.5 y'Hy + y'(v - Hx) + h1(y) over y.

    Forward-backward iteration y <- prox_h1(y - eta * grad, eta) with step
    eta = 1 / (safety * L), where L is the running maximum of gradient
    difference quotients ||grad(y) - grad(y')|| / ||y - y'|| over successive
    iterates, seeded by one random probe pair near the start point. Stops when
    the sup-norm iterate change drops to `tol`, or at `max_iters` (flagged via
    ``converged=False``).

    `z0` warm-starts the iteration (callers pass the previous outer
    iteration's minimizer); the cold start is x_k itself. `callback`, when
    given, is invoked with each new iterate.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    x_k = np.asarray(x_k, dtype=np.float64)
    v_k = np.asarray(v_k, dtype=np.float64)
    shift = v_k - metric.apply(x_k)

    y = x_k.copy() if z0 is None else np.array(z0, dtype=np.float64)
    grad = metric.apply(y) + shift

    rng = np.random.default_rng(cfg.probe_seed)
    probe = rng.standard_normal(x_k.size)
    probe /= max(np.linalg.norm(probe), 1e-30)
    probe_grad = metric.apply(y + 1e-2 * probe) + shift
    lip = max(np.linalg.norm(probe_grad - grad) / 1e-2, 1e-12)

    eta = 1.0 / (cfg.lipschitz_safety * lip)
    residual = np.inf
    iterations = 0
    for it in range(1, cfg.max_iters + 1):
        eta = 1.0 / (cfg.lipschitz_safety * lip)
        y_next = pen.prox_h1_scalar(y - eta * grad, eta)
        if not np.all(np.isfinite(y_next)):
            raise ValueError("non-finite inner iterate; metric is ill-conditioned")
        grad_next = metric.apply(y_next) + shift
        dy = y_next - y
        dy_norm = np.linalg.norm(dy)
        if dy_norm > 0:
            quotient = np.linalg.norm(grad_next - grad) / dy_norm
            if quotient > lip:
                lip = quotient
        residual = float(np.max(np.abs(dy))) if dy.size else 0.0
        y, grad = y_next, grad_next
        iterations = it
        if callback is not None:
            callback(y)
        if residual <= tol:
            break

    return InnerResult(z=y, iterations=iterations, final_step=eta,
                       residual=residual, converged=residual <= tol)
