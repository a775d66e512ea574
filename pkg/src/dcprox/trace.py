"""Per-iteration solve records backing diagnostics and result tables."""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

CONVERGED = "converged"
MAX_ITERS = "max_iters"
LINE_SEARCH_FAILED = "line_search_failed"


@dataclass
class IterationRecord:
    """One accepted outer iteration.

    `n_evals` is the cumulative count of objective/gradient evaluation
    equivalents (one full pass over the data each) up to and including this
    iteration; `wall_time` is seconds elapsed since the solve started.
    """

    iteration: int
    objective: float
    step_size: float
    direction_norm: float
    descent_quantity: float
    inner_iterations: int
    wall_time: float
    n_evals: int
    quadratic_term: float = float("nan")   # dx' H dx for the accepted direction
    inner_tolerance: float = float("nan")
    metric_floor: float = float("nan")     # lower bound on the metric spectrum
    lipschitz_estimate: float = float("nan")

    def as_dict(self):
        return asdict(self)


@dataclass
class SolveTrace:
    records: list = field(default_factory=list)
    status: str = MAX_ITERS
    initial_objective: float = float("nan")

    def append(self, record: IterationRecord):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records], dtype=np.float64)

    @property
    def final_objective(self) -> float:
        if not self.records:
            return self.initial_objective
        return self.records[-1].objective

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def total_evals(self) -> int:
        if not self.records:
            return 0
        return self.records[-1].n_evals

    def evals_to_reach(self, target: float, rel: float = 1e-4) -> int:
        """Cumulative evaluations spent until the objective first comes within
        `rel` (relative, floored at 1) of `target`."""
        gap = rel * max(1.0, abs(target))
        for r in self.records:
            if r.objective - target <= gap:
                return r.n_evals
        return self.total_evals
