"""Dataset ingestion (libsvm text), standardization, splits, the Gaussian
toy-problem generator, and prediction helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.stats

from .sparse import Dataset, SparseRowMatrix, spmv

SCALE_FLOOR = 1e-12


def read_libsvm(path, n_features=None) -> Dataset:
    """Parse a libsvm text file: per line "<label> idx:val idx:val ..." with
    1-based, strictly positive indices.

    Labels may use the {-1,+1} or the {0,1} alphabet (0 maps to -1); mixing
    the two is rejected. Malformed lines are reported with their line number.
    """
    rows = []
    raw_labels = []
    max_index = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                raw_labels.append(float(parts[0]))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: unparseable label {parts[0]!r}")
            idx = []
            val = []
            for tok in parts[1:]:
                try:
                    i_s, v_s = tok.split(":", 1)
                    i = int(i_s)
                    v = float(v_s)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: unparseable feature {tok!r}")
                if i < 1:
                    raise ValueError(f"{path}:{lineno}: index {i} is not 1-based")
                idx.append(i - 1)
                val.append(v)
            if len(set(idx)) != len(idx):
                raise ValueError(f"{path}:{lineno}: duplicate feature index")
            if idx:
                max_index = max(max_index, max(idx))
            rows.append((idx, val))

    uniq = set(raw_labels)
    if uniq <= {-1.0, 1.0}:
        labels = np.array([int(v) for v in raw_labels], dtype=np.int64)
    elif uniq <= {0.0, 1.0}:
        labels = np.array([1 if v == 1.0 else -1 for v in raw_labels], dtype=np.int64)
    else:
        raise ValueError(f"{path}: inconsistent label alphabet {sorted(uniq)}")

    d = max_index + 1
    if n_features is not None:
        if n_features < d:
            raise ValueError(f"{path}: file uses {d} features, n_features={n_features}")
        d = n_features
    features = SparseRowMatrix.from_rows(rows, d)
    return Dataset(features, labels)


def write_libsvm(data: Dataset, path) -> None:
    """Write in libsvm text format; values keep 17 significant digits so a
    read round-trips bit-exactly."""
    if not data.is_labeled and data.n_examples:
        raise ValueError("cannot write an unlabeled dataset in libsvm format")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(data.n_examples):
            idx, val = data.features.row(i)
            feats = " ".join(f"{j + 1}:{v:.17g}" for j, v in zip(idx, val))
            label = int(data.labels[i])
            fh.write(f"{label:+d} {feats}".rstrip() + "\n")


@dataclass(frozen=True)
class Standardizer:
    """Per-feature affine transform (x - mean) / scale fitted on training
    data only. Zero-variance features pass through untouched (mean 0,
    scale 1). In scale-only mode the mean is identically zero and sparsity
    is preserved."""

    mean: np.ndarray
    scale: np.ndarray
    with_mean: bool = True

    def transform(self, data: Dataset) -> Dataset:
        if data.n_features != self.mean.size:
            raise ValueError("dataset dimension does not match standardizer")
        if not self.with_mean:
            return Dataset(data.features.scale_columns(1.0 / self.scale), data.labels)
        # centering densifies rows; at benchmark scale use scale-only instead
        arr = (data.features.toarray() - self.mean) / self.scale
        return Dataset(SparseRowMatrix.from_dense(arr), data.labels)


def fit_standardizer(train: Dataset, with_mean=True) -> Standardizer:
    if train.n_examples == 0:
        raise ValueError("cannot fit a standardizer on an empty dataset")
    mean = train.features.column_means()
    var = np.maximum(train.features.column_mean_squares() - mean ** 2, 0.0)
    std = np.sqrt(var)  # population convention
    degenerate = std < SCALE_FLOOR
    scale = np.where(degenerate, 1.0, std)
    mean = np.where(degenerate, 0.0, mean)
    if not with_mean:
        mean = np.zeros_like(mean)
    return Standardizer(mean=mean, scale=scale, with_mean=with_mean)


def fit_apply_standardizer(train: Dataset, others=(), with_mean=True):
    """Fit on `train`, transform `train` and every dataset in `others` with
    the same parameters. Returns (train', others', standardizer)."""
    standardizer = fit_standardizer(train, with_mean=with_mean)
    train_t = standardizer.transform(train)
    others_t = [standardizer.transform(o) for o in others]
    return train_t, others_t, standardizer


@dataclass(frozen=True)
class ToySpec:
    """Shape of the synthetic two-class problem: only `n_relevant` of the
    `dim` features carry class information."""

    dim: int
    n_relevant: int
    n_train: int
    n_test: int = 0
    n_unlabeled: int = 0
    seed: int = 0
    mean_shift: np.ndarray | None = None   # fixed class mean; default random {-1,+1}^T
    covariance: np.ndarray | None = None   # fixed relevant-block covariance; default Wishart

    def __post_init__(self):
        if not 1 <= self.n_relevant <= self.dim:
            raise ValueError("need 1 <= n_relevant <= dim")


def generate_toy(spec: ToySpec):
    """Sample (train, test, unlabeled) datasets from a two-class Gaussian
    mixture.

    Classes +1/-1 have means +mu/-mu restricted to the first `n_relevant`
    coordinates, with mu drawn uniformly from {-1,+1}^T and a shared
    covariance drawn from a Wishart distribution (identity scale, T+1 degrees
    of freedom - the smallest count giving an almost-surely positive-definite
    draw). The remaining coordinates are independent standard normal noise
    for both classes. Classes are balanced; the unlabeled pool comes from the
    same mixture with labels discarded. A fixed seed reproduces the datasets
    bit for bit.
    """
    rng = np.random.default_rng(spec.seed)
    T, d = spec.n_relevant, spec.dim

    if spec.mean_shift is not None:
        mu = np.asarray(spec.mean_shift, dtype=np.float64)
        if mu.shape != (T,):
            raise ValueError("mean_shift must have length n_relevant")
    else:
        mu = rng.choice([-1.0, 1.0], size=T)

    if spec.covariance is not None:
        cov = np.atleast_2d(np.asarray(spec.covariance, dtype=np.float64))
    else:
        cov = np.atleast_2d(scipy.stats.wishart(df=T + 1, scale=np.eye(T)).rvs(random_state=rng))
    chol = np.linalg.cholesky(cov)

    def draw(n, labeled):
        raw = np.concatenate([np.ones(n - n // 2), -np.ones(n // 2)]).astype(np.int64)
        labels = raw[rng.permutation(n)] if n else raw
        relevant = labels[:, None] * mu + rng.standard_normal((n, T)) @ chol.T
        noise = rng.standard_normal((n, d - T))
        X = np.hstack([relevant, noise]) if d > T else relevant
        features = SparseRowMatrix.from_dense(X.reshape(n, d))
        return Dataset(features, labels if labeled else np.empty(0, dtype=np.int64))

    train = draw(spec.n_train, labeled=True)
    test = draw(spec.n_test, labeled=True)
    unlabeled = draw(spec.n_unlabeled, labeled=False)
    return train, test, unlabeled


def train_test_split(data: Dataset, test_fraction=0.2, seed=0):
    """Seeded random split; returns (train, test)."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(data.n_examples)
    n_test = int(round(test_fraction * data.n_examples))
    return data.subset(perm[n_test:]), data.subset(perm[:n_test])


def predict_labels(features: SparseRowMatrix, x) -> np.ndarray:
    """sign(a'x) per row, with ties resolved to +1."""
    margins = spmv(features, np.asarray(x, dtype=np.float64))
    return np.where(margins >= 0.0, 1, -1).astype(np.int64)


def accuracy(data: Dataset, x) -> float:
    """Classification accuracy in percent."""
    if not data.is_labeled:
        raise ValueError("accuracy needs a labeled dataset")
    predictions = predict_labels(data.features, x)
    return 100.0 * float(np.mean(predictions == data.labels))
