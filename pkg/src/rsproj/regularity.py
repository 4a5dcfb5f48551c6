"""Regularity constant c = d * max_j(x_j^2) / ||x||^2.

c lies in [1, d]; it is 1 exactly when all magnitudes are equal and d
when only one entry is non-zero. For a binary vector with s non-zeros
c = d/s. Subset-sampling guarantees degrade quadratically in c, so the
dataset-level value (the max over rows, or over sampled row
differences) is what the bound calculators consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrixio import SparseBinaryMatrix


class UndefinedRegularityError(ValueError):
    """Regularity is undefined for the all-zero vector."""


@dataclass(frozen=True)
class RegularityReport:
    per_row_c: np.ndarray  # NaN marks rows (or pairs) with no non-zeros
    dataset_c: float
    n_zero_rows: int
    basis: str  # "points" | "sampled_differences"
    n_pairs_sampled: int = 0

    @property
    def n_defined(self) -> int:
        return int(np.sum(~np.isnan(self.per_row_c)))


def regularity_of_vector(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    # normalize by the max magnitude first: scale-invariant by definition,
    # and immune to underflow of squared subnormals
    m = np.abs(x).max() if len(x) else 0.0
    if m == 0.0:
        raise UndefinedRegularityError("all-zero vector has no regularity value")
    y = x / m
    return float(len(x) / np.sum(y * y))


def _binary_row_c(d, s):
    return d / s if s > 0 else np.nan


def _points_c(X) -> np.ndarray:
    if isinstance(X, SparseBinaryMatrix):
        nnz = X.row_nnz().astype(np.float64)
        with np.errstate(divide="ignore"):
            out = np.where(nnz > 0, X.n_cols / nnz, np.nan)
        return out
    v = X.values
    m = np.abs(v).max(axis=1)
    safe = np.where(m > 0, m, 1.0)
    y = v / safe[:, None]
    totals = np.sum(y * y, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(m > 0, v.shape[1] / totals, np.nan)
    return out


def _sample_pair(rng, n):
    i = int(rng.integers(n))
    j = int(rng.integers(n - 1))
    if j >= i:
        j += 1
    return i, j


def _differences_c(X, n_pairs, rng) -> np.ndarray:
    n = X.n_rows
    if n < 2:
        raise ValueError("difference basis needs at least 2 rows")
    out = np.empty(n_pairs, dtype=np.float64)
    if isinstance(X, SparseBinaryMatrix):
        d = X.n_cols
        for t in range(n_pairs):
            i, j = _sample_pair(rng, n)
            # difference of binary rows has entries in {-1, 0, 1}
            nnz = len(np.setxor1d(X.row(i), X.row(j), assume_unique=True))
            out[t] = d / nnz if nnz else np.nan
    else:
        v = X.values
        for t in range(n_pairs):
            i, j = _sample_pair(rng, n)
            diff = v[i] - v[j]
            m = np.abs(diff).max()
            if m == 0.0:
                out[t] = np.nan
            else:
                y = diff / m
                out[t] = v.shape[1] / np.sum(y * y)
    return out


def regularity_of_dataset(
    X, basis="points", n_pairs=1000, rng=None
) -> RegularityReport:
    """Dataset-level c: max over per-row values (``points``) or over
    ``n_pairs`` uniformly sampled distinct-row difference vectors
    (``sampled_differences``). Zero rows / zero differences are skipped
    and counted, never fatal unless nothing is defined."""
    if basis == "points":
        per = _points_c(X)
        n_sampled = 0
    elif basis == "sampled_differences":
        if n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")
        if rng is None:
            raise ValueError("sampled_differences basis needs an rng")
        per = _differences_c(X, n_pairs, rng)
        n_sampled = n_pairs
    else:
        raise ValueError(f"unknown basis {basis!r}")
    n_zero = int(np.isnan(per).sum())
    if n_zero == len(per):
        raise UndefinedRegularityError(
            "no defined pairs" if basis == "sampled_differences" else "all rows are zero"
        )
    return RegularityReport(
        per_row_c=per,
        dataset_c=float(np.nanmax(per)),
        n_zero_rows=n_zero,
        basis=basis,
        n_pairs_sampled=n_sampled,
    )
