"""Proximal Newton optimization for composite objectives whose smooth and
nonsmooth terms are both differences of convex functions, together with GIST,
DC-algorithm and proximal-gradient baselines and sparse (transductive)
logistic regression applications."""

from .sparse import Dataset, SparseRowMatrix, spmv, spmv_transpose
from .objective import CompositeObjective, DcNonsmooth, DcSmooth
from .losses import (LogisticLoss, TransductiveLogisticLoss, margin_loss,
                     transductive_margin_terms)
from .penalties import CappedL1Penalty, L1Penalty, soft_threshold
from .lbfgs import LbfgsMetric
from .direction import (InnerConfig, InnerResult, adaptive_tolerance,
                        assemble_v, solve_direction)
from .newton import (OuterConfig, StationarityReport, dc_newton_solve,
                     descent_quantity, stationarity_check, theoretical_min_step)
from .baselines import (DcaConfig, GistConfig, dca_solve, gist_solve,
                        proximal_gradient_solve)
from .data import (Standardizer, ToySpec, accuracy, fit_apply_standardizer,
                   fit_standardizer, generate_toy, predict_labels,
                   read_libsvm, train_test_split, write_libsvm)
from .trace import (CONVERGED, LINE_SEARCH_FAILED, MAX_ITERS, IterationRecord,
                    SolveTrace)

__version__ = "0.1.0"

__all__ = [
    "Dataset", "SparseRowMatrix", "spmv", "spmv_transpose",
    "CompositeObjective", "DcNonsmooth", "DcSmooth",
    "LogisticLoss", "TransductiveLogisticLoss", "margin_loss",
    "transductive_margin_terms",
    "CappedL1Penalty", "L1Penalty", "soft_threshold",
    "LbfgsMetric",
    "InnerConfig", "InnerResult", "adaptive_tolerance", "assemble_v",
    "solve_direction",
    "OuterConfig", "StationarityReport", "dc_newton_solve",
    "descent_quantity", "stationarity_check", "theoretical_min_step",
    "DcaConfig", "GistConfig", "dca_solve", "gist_solve",
    "proximal_gradient_solve",
    "Standardizer", "ToySpec", "accuracy", "fit_apply_standardizer",
    "fit_standardizer", "generate_toy", "predict_labels", "read_libsvm",
    "train_test_split", "write_libsvm",
    "CONVERGED", "LINE_SEARCH_FAILED", "MAX_ITERS", "IterationRecord",
    "SolveTrace",
]
