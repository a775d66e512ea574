"""Smooth DC losses: logistic regression and its transductive extension."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.special import expit

from .objective import DcSmooth
from .sparse import Dataset, spmv, spmv_transpose


def margin_loss(u):
    """Logistic margin loss log(1 + exp(-u)), overflow-safe for large |u|."""
    return np.logaddexp(0.0, -np.asarray(u, dtype=np.float64))


class LogisticLoss(DcSmooth):
    """sum_i log(1 + exp(-y_i a_i' x)); purely convex, so f2 = 0."""

    def __init__(self, data: Dataset):
        if data.n_examples and not data.is_labeled:
            raise ValueError("logistic loss needs labeled examples")
        self.data = data

    def _signed_margins(self, x):
        return self.data.labels * spmv(self.data.features, x)

    def value_f1(self, x) -> float:
        if self.data.n_examples == 0:
            return 0.0
        return float(np.sum(margin_loss(self._signed_margins(x))))

    def grad_f1(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.data.n_examples == 0:
            return np.zeros_like(x)
        m = self._signed_margins(x)
        weights = -self.data.labels * expit(-m)
        return spmv_transpose(self.data.features, weights)

    def value_and_grad(self, x):
        """(value, gradient) sharing one margin computation."""
        x = np.asarray(x, dtype=np.float64)
        if self.data.n_examples == 0:
            return 0.0, np.zeros_like(x)
        m = self._signed_margins(x)
        value = float(np.sum(margin_loss(m)))
        grad = spmv_transpose(self.data.features, -self.data.labels * expit(-m))
        return value, grad


class TransductiveTerms(NamedTuple):
    """Pointwise decomposition of the symmetric unlabeled-margin loss."""

    loss: np.ndarray          # the full loss, = convex_part - concave_part
    convex_part: np.ndarray
    concave_part: np.ndarray
    d_convex_part: np.ndarray
    d_concave_part: np.ndarray


def transductive_margin_terms(u, tau) -> TransductiveTerms:
    """Evaluate the symmetric margin loss that penalizes unlabeled margins
    near zero, together with its DC decomposition and exact derivatives.

    Built from shifted copies of ``margin_loss``: with g = margin_loss the
    loss at margin u is ``1 - (g(u) - g(u+tau))/tau - (g(-u) - g(-u+tau))/tau``;
    the convex part collects the +tau shifts, the concave part the unshifted
    terms. `tau` controls the smoothness of the plateau.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    u = np.asarray(u, dtype=np.float64)
    convex = 1.0 + (margin_loss(u + tau) + margin_loss(-u + tau)) / tau
    concave = (margin_loss(u) + margin_loss(-u)) / tau
    # d/du margin_loss(u) = -expit(-u)
    d_convex = (-expit(-(u + tau)) + expit(u - tau)) / tau
    d_concave = (-expit(-u) + expit(u)) / tau
    return TransductiveTerms(convex - concave, convex, concave, d_convex, d_concave)


class TransductiveLogisticLoss(DcSmooth):
    """Logistic loss on labeled rows plus a symmetric low-density penalty on
    unlabeled margins, weighted by `gamma`.

    DC split: the convex part of the unlabeled loss joins the logistic term in
    f1; the concave correction forms f2. Margins A@x and B@x are computed once
    per evaluation and shared between the parts.
    """

    def __init__(self, labeled: Dataset, unlabeled: Dataset, gamma: float, tau: float = 1.0):
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if tau <= 0:
            raise ValueError("tau must be positive")
        if unlabeled.is_labeled:
            raise ValueError("unlabeled dataset must carry no labels")
        if unlabeled.n_examples and unlabeled.n_features != labeled.n_features:
            raise ValueError("labeled and unlabeled feature dimensions differ")
        self.labeled = labeled
        self.unlabeled = unlabeled
        self.gamma = float(gamma)
        self.tau = float(tau)
        self._logistic = LogisticLoss(labeled)

    def _unlabeled_margins(self, x):
        return spmv(self.unlabeled.features, x)

    def value_f1(self, x) -> float:
        val = self._logistic.value_f1(x)
        if self.gamma and self.unlabeled.n_examples:
            terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
            val += self.gamma * float(np.sum(terms.convex_part))
        return val

    def grad_f1(self, x) -> np.ndarray:
        g = self._logistic.grad_f1(x)
        if self.gamma and self.unlabeled.n_examples:
            terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
            g = g + self.gamma * spmv_transpose(self.unlabeled.features, terms.d_convex_part)
        return g

    def value_f2(self, x) -> float:
        if not (self.gamma and self.unlabeled.n_examples):
            return 0.0
        terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
        return self.gamma * float(np.sum(terms.concave_part))

    def grad_f2(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if not (self.gamma and self.unlabeled.n_examples):
            return np.zeros_like(x)
        terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
        return self.gamma * spmv_transpose(self.unlabeled.features, terms.d_concave_part)

    def gradients(self, x):
        g1 = self._logistic.grad_f1(x)
        g2 = np.zeros_like(np.asarray(x, dtype=np.float64))
        if self.gamma and self.unlabeled.n_examples:
            terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
            g1 = g1 + self.gamma * spmv_transpose(self.unlabeled.features, terms.d_convex_part)
            g2 = self.gamma * spmv_transpose(self.unlabeled.features, terms.d_concave_part)
        return g1, g2

    def value_and_grads(self, x):
        """(f1, grad f1, f2, grad f2) sharing one margin computation."""
        f1 = self._logistic.value_f1(x)
        g1 = self._logistic.grad_f1(x)
        if not (self.gamma and self.unlabeled.n_examples):
            z = np.zeros_like(np.asarray(x, dtype=np.float64))
            return f1, g1, 0.0, z
        terms = transductive_margin_terms(self._unlabeled_margins(x), self.tau)
        f1 += self.gamma * float(np.sum(terms.convex_part))
        g1 = g1 + self.gamma * spmv_transpose(self.unlabeled.features, terms.d_convex_part)
        f2 = self.gamma * float(np.sum(terms.concave_part))
        g2 = self.gamma * spmv_transpose(self.unlabeled.features, terms.d_concave_part)
        return f1, g1, f2, g2
