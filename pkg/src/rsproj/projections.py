"""The four projection families and their norm scalings.

Index-subset (RS) projection keeps k of the d coordinates, the same
subset for every observation; Gaussian and Achlioptas-sparse random
projections multiply by a k x d matrix; PCA projects onto the top-k
sample-covariance eigenvectors. Scalings make the projected norms
comparable to the originals:

    rs, gaussian   sqrt(d/k)
    sparse rp      sqrt(1/k)   (or sqrt(3/k), the variance-unbiased
                                value for entries that are +-1 w.p. 1/6)
    pca            sqrt(total variance / top-k variance)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrixio import DenseMatrix, SparseBinaryMatrix


@dataclass(frozen=True)
class IndexSubset:
    d: int
    indices: np.ndarray  # strictly increasing, in [0, d)

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        if len(idx) < 1 or len(idx) > self.d:
            raise ValueError(f"need 1 <= k <= d, got k={len(idx)}, d={self.d}")
        if idx[0] < 0 or idx[-1] >= self.d:
            raise ValueError("subset index out of range")
        if len(idx) > 1 and np.any(np.diff(idx) <= 0):
            raise ValueError("subset indices must be strictly increasing")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def k(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class ProjectionOperator:
    kind: str  # rs | gaussian_rp | sparse_rp | pca
    d: int
    k: int
    payload: object  # IndexSubset for rs, k x d ndarray otherwise
    scale: float
    means: np.ndarray | None = None  # pca centering, None otherwise


def _floyd(d, m, rng) -> set:
    """Uniform m-subset of {0..d-1} in O(m) time and space."""
    chosen = set()
    if m == 0:
        return chosen
    draws = rng.integers(0, np.arange(d - m + 1, d + 1))
    for j, t in zip(range(d - m, d), draws):
        t = int(t)
        if t in chosen:
            chosen.add(j)
        else:
            chosen.add(t)
    return chosen


def rs_sample_indices(d, k, rng) -> IndexSubset:
    """k distinct indices uniform over all C(d, k) subsets.

    Floyd's algorithm when k <= d/2; otherwise the complement of a
    (d-k)-subset is sampled, keeping setup cost O(min(k, d-k)).
    """
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    if k <= d - k:
        idx = np.fromiter(_floyd(d, k, rng), dtype=np.int64, count=k)
        idx.sort()
    else:
        excluded = _floyd(d, d - k, rng)
        mask = np.ones(d, dtype=bool)
        if excluded:
            mask[np.fromiter(excluded, dtype=np.int64, count=len(excluded))] = False
        idx = np.nonzero(mask)[0].astype(np.int64)
    return IndexSubset(d=d, indices=idx)


def rs_project(X, subset, apply_scale=True) -> DenseMatrix:
    """Keep the subset's columns in ascending index order, optionally
    multiplied by sqrt(d/k)."""
    if subset.d != X.n_cols:
        raise ValueError(f"subset is over d={subset.d}, data has d={X.n_cols}")
    if isinstance(X, SparseBinaryMatrix):
        position = np.full(X.n_cols, -1, dtype=np.int64)
        position[subset.indices] = np.arange(subset.k, dtype=np.int64)
        out = kernels.subset_select_binary(X.indices, X.indptr, position, subset.k)
    else:
        out = X.values[:, subset.indices]
    if apply_scale:
        out *= math.sqrt(subset.d / subset.k)
    return DenseMatrix(out)


def rs_operator(d, k, rng) -> ProjectionOperator:
    subset = rs_sample_indices(d, k, rng)
    return ProjectionOperator(
        kind="rs", d=d, k=k, payload=subset, scale=math.sqrt(d / k)
    )


def gaussian_rp_matrix(d, k, orthonormalize, rng) -> ProjectionOperator:
    """k x d Gaussian matrix; optionally replace the rows with an
    orthonormal basis of their span (QR of the transpose).

    Rows have unit norm in expectation (entry variance 1/d), exactly
    unit norm when orthonormalized, so the sqrt(d/k) scale makes
    projected squared norms unbiased in both modes.
    """
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    if orthonormalize and k > d:
        raise ValueError(f"cannot orthonormalize {k} rows in dimension {d}")
    payload = rng.standard_normal((k, d))
    if orthonormalize:
        while True:
            q, r = np.linalg.qr(payload.T)
            if np.all(np.abs(np.diag(r)) > 1e-12):
                break
            payload = rng.standard_normal((k, d))  # measure-zero redraw
        payload = np.ascontiguousarray(q.T)
    else:
        payload /= math.sqrt(d)
    return ProjectionOperator(
        kind="gaussian_rp", d=d, k=k, payload=payload, scale=math.sqrt(d / k)
    )


def sparse_rp_matrix(d, k, rng, scale_mode="paper") -> ProjectionOperator:
    """Entries +1 w.p. 1/6, -1 w.p. 1/6, 0 w.p. 2/3.

    scale_mode "paper" uses sqrt(1/k); "unbiased" uses sqrt(3/k), which
    compensates the 1/3 entry variance so projected squared norms are
    unbiased.
    """
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    if scale_mode == "paper":
        scale = math.sqrt(1.0 / k)
    elif scale_mode == "unbiased":
        scale = math.sqrt(3.0 / k)
    else:
        raise ValueError(f"unknown scale_mode {scale_mode!r}")
    u = rng.random((k, d))
    payload = np.where(u < 1 / 6, 1.0, np.where(u < 1 / 3, -1.0, 0.0))
    return ProjectionOperator(kind="sparse_rp", d=d, k=k, payload=payload, scale=scale)


def pca_operator(X: DenseMatrix, k) -> ProjectionOperator:
    """Top-k eigenvectors of the sample covariance (divisor n-1),
    descending eigenvalues, with the trace-ratio scale.

    Implemented through the SVD of the centered data matrix: identical
    spectrum, and the rows stay orthonormal even past the data rank.
    """
    n, d = X.n_rows, X.n_cols
    if n < 2:
        raise ValueError("pca needs at least 2 rows")
    if not 1 <= k <= min(d, n):
        raise ValueError(f"need 1 <= k <= min(d, n_rows) = {min(d, n)}, got {k}")
    means = X.values.mean(axis=0)
    centered = X.values - means
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    eigvals = svals**2 / (n - 1)
    trace_total = eigvals.sum()
    trace_k = eigvals[:k].sum()
    if trace_k == 0.0:
        raise ValueError("degenerate spectrum: top-k eigenvalues are all zero")
    return ProjectionOperator(
        kind="pca",
        d=d,
        k=k,
        payload=np.ascontiguousarray(vt[:k]),
        scale=math.sqrt(trace_total / trace_k),
        means=means,
    )


def apply_operator(op: ProjectionOperator, X, apply_scale=True) -> DenseMatrix:
    """N x k projected matrix; rs dispatches to rs_project bit-for-bit.

    PCA subtracts its stored column means before projecting; the other
    kinds project the data as-is.
    """
    if op.d != X.n_cols:
        raise ValueError(f"operator is over d={op.d}, data has d={X.n_cols}")
    if op.kind == "rs":
        return rs_project(X, op.payload, apply_scale=apply_scale)
    if isinstance(X, SparseBinaryMatrix):
        if op.kind == "pca":
            raise ValueError("pca is not supported on sparse input")
        import scipy.sparse as sp

        csr = sp.csr_matrix(
            (np.ones(len(X.indices)), X.indices, X.indptr),
            shape=(X.n_rows, X.n_cols),
        )
        out = np.asarray(csr @ op.payload.T)
    else:
        values = X.values
        if op.kind == "pca":
            values = values - op.means
        out = values @ op.payload.T
    if apply_scale:
        out = out * op.scale
    return DenseMatrix(out)
