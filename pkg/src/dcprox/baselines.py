"""Comparison solvers: GIST, the classical DC algorithm, and an accelerated
proximal-gradient method that doubles as the DC algorithm's convex inner
solver and as the oracle for convex-reduction tests."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .trace import CONVERGED, LINE_SEARCH_FAILED, MAX_ITERS, IterationRecord, SolveTrace


@dataclass
class GistConfig:
    monotone: bool = False           # the nonmonotone variant is the stronger baseline
    nonmonotone_window: int = 5
    bb_step_min: float = 1e-8
    bb_step_max: float = 1e8
    sigma: float = 1e-3              # acceptance constant, in (0, 1)
    max_iters: int = 10000
    rel_obj_tol: float = 1e-6
    max_step_halvings: int = 50

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise ValueError("sigma must lie in (0, 1)")


@dataclass
class DcaConfig:
    max_dc_iters: int = 20           # protocol cap on DC iterations
    inner_tol: float = 1e-8
    inner_max_iters: int = 5000
    rel_obj_tol: float = 1e-6


def proximal_gradient_solve(smooth, pen, shift=None, x0=None, dim=None,
                            tol=1e-8, max_iters=5000):
    """Accelerated (FISTA-style) proximal gradient on f1(x) - shift'x + h1(x).

    Only the convex pieces are consumed: `smooth.value_f1`/`grad_f1` and
    `pen.value_h1`/`prox_h1_scalar`. The smooth-part Lipschitz constant is
    found by doubling until the quadratic upper bound holds at the trial
    point. Stops when the fixed-point (prox) residual falls below `tol`.

    Returns (x, trace); trace objectives include the h1 term and the shift.
    """
    if x0 is not None:
        x = np.array(x0, dtype=np.float64)
    elif dim is not None:
        x = np.zeros(dim, dtype=np.float64)
    else:
        raise ValueError("pass x0 or dim")
    if shift is None:
        shift = np.zeros_like(x)
    else:
        shift = np.asarray(shift, dtype=np.float64)

    def val(p):
        return smooth.value_f1(p) - float(shift @ p)

    def grad(p):
        return smooth.grad_f1(p) - shift

    t_start = time.perf_counter()
    n_evals = 0
    trace = SolveTrace(initial_objective=val(x) + pen.value_h1(x))
    n_evals += 1
    status = MAX_ITERS

    L = 1.0
    y = x.copy()
    momentum = 1.0
    check_every = 5
    for k in range(max_iters):
        gy = grad(y)
        fy = val(y)
        n_evals += 2
        while True:
            x_new = pen.prox_h1_scalar(y - gy / L, 1.0 / L)
            diff = x_new - y
            f_new = val(x_new)
            n_evals += 1
            bound = fy + float(gy @ diff) + 0.5 * L * float(diff @ diff)
            if f_new <= bound + 1e-12 * max(1.0, abs(fy)):
                break
            L *= 2.0
            if L > 1e20:
                raise ValueError("Lipschitz search diverged; gradient looks wrong")
        # adaptive restart: drop momentum when it opposes the prox step
        if float((y - x_new) @ (x_new - x)) > 0.0:
            momentum = 1.0
        momentum_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * momentum * momentum))
        y = x_new + ((momentum - 1.0) / momentum_new) * (x_new - x)

        step_norm = float(np.max(np.abs(x_new - x))) if x.size else 0.0
        converged = False
        if k % check_every == 0 or step_norm <= tol:
            g_new = grad(x_new)
            n_evals += 1
            residual = float(np.max(np.abs(
                x_new - pen.prox_h1_scalar(x_new - g_new / L, 1.0 / L))))
            converged = residual <= tol
        trace.append(IterationRecord(
            iteration=k, objective=f_new + pen.value_h1(x_new), step_size=1.0 / L,
            direction_norm=step_norm,
            descent_quantity=float("nan"), inner_iterations=0,
            wall_time=time.perf_counter() - t_start, n_evals=n_evals))
        x, momentum = x_new, momentum_new
        if converged:
            status = CONVERGED
            break

    trace.status = status
    return x, trace


def gist_solve(obj, cfg: GistConfig | None = None, x0=None):
    """Proximal gradient with Barzilai-Borwein steps, a (non)monotone
    acceptance rule, and the exact proximal map of the full (possibly
    nonconvex) penalty.

    The trial inverse step starts from the clamped BB quotient s'y / s's and
    doubles until F(x_new) <= F_ref - (sigma/2) * eta * ||x_new - x||^2, where
    F_ref is the worst of the last `nonmonotone_window` objectives (or the
    current one when `monotone`).
    """
    cfg = cfg or GistConfig()
    pen = obj.nonsmooth
    x = np.zeros(obj.dim, dtype=np.float64) if x0 is None else obj.check_point(x0).copy()

    t_start = time.perf_counter()
    F = obj.value(x)
    g1, g2 = obj.smooth_gradients(x)
    g = g1 - g2
    n_evals = 2

    trace = SolveTrace(initial_objective=F)
    status = MAX_ITERS
    recent = deque([F], maxlen=max(1, cfg.nonmonotone_window))
    eta = 1.0

    for k in range(cfg.max_iters):
        F_ref = F if cfg.monotone else max(recent)
        eta_k = eta
        halvings = 0
        while True:
            step = 1.0 / eta_k
            x_new = pen.prox_full(x - g * step, step)
            F_new = obj.value(x_new)
            n_evals += 1
            dx = x_new - x
            if F_new <= F_ref - 0.5 * cfg.sigma * eta_k * float(dx @ dx):
                break
            halvings += 1
            if halvings > cfg.max_step_halvings:
                trace.status = LINE_SEARCH_FAILED
                return x, trace
            eta_k *= 2.0

        g1n, g2n = obj.smooth_gradients(x_new)
        g_new = g1n - g2n
        n_evals += 1
        s = dx
        y_diff = g_new - g
        ss = float(s @ s)
        sy = float(s @ y_diff)
        bb = sy / ss if ss > 0 else 1.0
        eta = float(np.clip(bb, cfg.bb_step_min, cfg.bb_step_max))

        trace.append(IterationRecord(
            iteration=k, objective=F_new, step_size=1.0 / eta_k,
            direction_norm=float(np.max(np.abs(dx))) if dx.size else 0.0,
            descent_quantity=float("nan"), inner_iterations=halvings,
            wall_time=time.perf_counter() - t_start, n_evals=n_evals))

        rel_change = abs(F_new - F) / max(1.0, abs(F))
        x, F, g = x_new, F_new, g_new
        recent.append(F)
        if rel_change < cfg.rel_obj_tol:
            status = CONVERGED
            break

    trace.status = status
    return x, trace


def dca_solve(obj, cfg: DcaConfig | None = None, x0=None):
    """Classical DC algorithm: linearize the concave parts at the current
    point and fully solve each resulting convex problem.

    The convex subproblem min f1(x) + h1(x) - (grad f2 + z_h2)'x is handed to
    `proximal_gradient_solve`, warm-started at the current point. The
    objective never increases across DC iterations (up to the inner
    tolerance); iterations are capped by `max_dc_iters`.
    """
    cfg = cfg or DcaConfig()
    x = np.zeros(obj.dim, dtype=np.float64) if x0 is None else obj.check_point(x0).copy()

    t_start = time.perf_counter()
    F = obj.value(x)
    n_evals = 1
    trace = SolveTrace(initial_objective=F)
    status = MAX_ITERS

    for it in range(cfg.max_dc_iters):
        g1, g2 = obj.smooth_gradients(x)
        n_evals += 1
        shift = g2 + obj.subgrad_h2(x)
        x_new, inner_trace = proximal_gradient_solve(
            obj.smooth, obj.nonsmooth, shift=shift, x0=x,
            tol=cfg.inner_tol, max_iters=cfg.inner_max_iters)
        n_evals += inner_trace.total_evals
        F_new = obj.value(x_new)
        n_evals += 1

        trace.append(IterationRecord(
            iteration=it, objective=F_new, step_size=1.0,
            direction_norm=float(np.max(np.abs(x_new - x))) if x.size else 0.0,
            descent_quantity=float("nan"), inner_iterations=len(inner_trace),
            wall_time=time.perf_counter() - t_start, n_evals=n_evals))

        rel_change = abs(F_new - F) / max(1.0, abs(F))
        x, F = x_new, F_new
        if rel_change < cfg.rel_obj_tol:
            status = CONVERGED
            break

    trace.status = status
    return x, trace
