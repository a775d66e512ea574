"""Row-sparse matrices and dataset containers shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class SparseRowMatrix:
    """Immutable row-major sparse matrix (CSR, sorted column indices).

    Both shipped losses stream over example rows, so rows are the storage and
    iteration unit. Products delegate to scipy's sequential CSR/CSC kernels,
    which reduce in a fixed order; traces are therefore reproducible run to
    run for a fixed seed.
    """

    def __init__(self, matrix):
        m = sp.csr_array(matrix, dtype=np.float64)
        m.sum_duplicates()
        m.sort_indices()
        if m.nnz and not np.all(np.isfinite(m.data)):
            raise ValueError("sparse matrix contains non-finite entries")
        self._m = m

    @classmethod
    def from_dense(cls, arr) -> "SparseRowMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=np.float64))
        return cls(sp.csr_array(arr))

    @classmethod
    def from_rows(cls, rows, n_cols) -> "SparseRowMatrix":
        """Build from an iterable of (indices, values) pairs, one per row."""
        indptr = [0]
        indices: list = []
        data: list = []
        for idx, val in rows:
            idx = np.asarray(idx, dtype=np.int64)
            val = np.asarray(val, dtype=np.float64)
            if idx.size and (idx.min() < 0 or idx.max() >= n_cols):
                raise ValueError(f"column index out of range for n_cols={n_cols}")
            order = np.argsort(idx, kind="stable")
            indices.extend(idx[order])
            data.extend(val[order])
            indptr.append(len(indices))
        m = sp.csr_array(
            (np.asarray(data, dtype=np.float64),
             np.asarray(indices, dtype=np.int64),
             np.asarray(indptr, dtype=np.int64)),
            shape=(len(indptr) - 1, n_cols),
        )
        return cls(m)

    @property
    def n_rows(self) -> int:
        return self._m.shape[0]

    @property
    def n_cols(self) -> int:
        return self._m.shape[1]

    @property
    def nnz(self) -> int:
        return self._m.nnz

    def row(self, i):
        """Return (indices, values) of row i, indices strictly increasing."""
        lo, hi = self._m.indptr[i], self._m.indptr[i + 1]
        return self._m.indices[lo:hi].copy(), self._m.data[lo:hi].copy()

    def iter_rows(self):
        for i in range(self.n_rows):
            yield self.row(i)

    def toarray(self) -> np.ndarray:
        return self._m.toarray()

    def column_means(self) -> np.ndarray:
        """Per-column mean, counting absent entries as zero."""
        if self.n_rows == 0:
            return np.zeros(self.n_cols)
        return np.asarray(self._m.mean(axis=0)).ravel()

    def column_mean_squares(self) -> np.ndarray:
        """Per-column mean of squared entries, counting absent entries as zero."""
        if self.n_rows == 0:
            return np.zeros(self.n_cols)
        squared = self._m.copy()
        squared.data = squared.data ** 2
        return np.asarray(squared.mean(axis=0)).ravel()

    def scale_columns(self, factors) -> "SparseRowMatrix":
        """Multiply column j by factors[j]; sparsity pattern is preserved."""
        factors = np.asarray(factors, dtype=np.float64)
        if factors.shape != (self.n_cols,):
            raise ValueError("factor vector length must equal n_cols")
        m = self._m.copy()
        m.data *= factors[m.indices]
        return SparseRowMatrix(m)

    def with_n_cols(self, n_cols) -> "SparseRowMatrix":
        """Widen (or validate) the column count, keeping all entries."""
        if n_cols < self.n_cols and (self.nnz == 0 or self._m.indices.max() < n_cols):
            pass
        elif n_cols < self.n_cols:
            raise ValueError("cannot shrink below the largest used column index")
        m = sp.csr_array(
            (self._m.data.copy(), self._m.indices.copy(), self._m.indptr.copy()),
            shape=(self.n_rows, n_cols),
        )
        return SparseRowMatrix(m)

    def hstack_ones(self) -> "SparseRowMatrix":
        """Append a constant-1 column (intercept feature)."""
        ones = sp.csr_array(np.ones((self.n_rows, 1)))
        return SparseRowMatrix(sp.hstack([self._m, ones], format="csr"))

    def __repr__(self):
        return f"SparseRowMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def spmv(m: SparseRowMatrix, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product M @ x with sequential per-row accumulation."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (m.n_cols,):
        raise ValueError(f"x has length {x.shape}, expected ({m.n_cols},)")
    return m._m @ x


def spmv_transpose(m: SparseRowMatrix, r: np.ndarray) -> np.ndarray:
    """Transposed product M.T @ r with deterministic accumulation order."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (m.n_rows,):
        raise ValueError(f"r has length {r.shape}, expected ({m.n_rows},)")
    return m._m.T @ r


@dataclass(frozen=True)
class Dataset:
    """Feature matrix plus optional labels in {-1, +1} (empty for unlabeled)."""

    features: SparseRowMatrix
    labels: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if labels.size and labels.shape != (self.features.n_rows,):
            raise ValueError("labels length must equal n_rows or 0")
        if labels.size and not np.all(np.isin(labels, (-1, 1))):
            raise ValueError("labels must be -1 or +1")

    @property
    def n_examples(self) -> int:
        return self.features.n_rows

    @property
    def n_features(self) -> int:
        return self.features.n_cols

    @property
    def is_labeled(self) -> bool:
        return self.labels.size > 0

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        feats = SparseRowMatrix(self.features._m[rows])
        labels = self.labels[rows] if self.is_labeled else self.labels
        return Dataset(feats, labels)
