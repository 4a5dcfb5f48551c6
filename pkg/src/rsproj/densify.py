"""Matrix-free reflection through the all-ones direction.

With v = (1/sqrt(d)) * 1 and H = I - 2vv^T, applying H costs one pass
for the row sum and one for the update: Hx = x - (2/d) * sum(x) * 1.
H is an involution and an isometry, so it never changes the Euclidean
geometry of a dataset; what it changes is the coordinate representation.
A binary row with s non-zeros maps to exactly two values,

    on  = (d - 2s)/d   at the support,
    off = -2s/d        elsewhere,

which lets the whole transform run in O(s) per row and drops the
regularity constant from d/s to

    c' = d/s - 4 + 4s/d     if 4s <  d
    c' = 4s/d               if 4s >= d  (and s < d)

making subset-sampling bounds usable on moderately sparse binary data.
The s = d row has no off-positions: H negates it, so c' = c = 1 there
(the two-case formula would claim 4, but it maximizes over an entry
class that does not exist).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrixio import DenseMatrix, SparseBinaryMatrix
from .regularity import RegularityReport, UndefinedRegularityError


def householder_apply_dense(x) -> np.ndarray:
    """Reflect a vector (or a stack of row vectors) without forming H."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    shift = (2.0 / d) * x.sum(axis=-1, keepdims=True)
    return x - shift


def householder_apply_binary(row_indices, d):
    """Compact reflection of a binary row: (on_value, off_value, support).

    on_value is NaN for the all-zero row (no support positions exist);
    the zero vector is a fixed point.
    """
    support = np.asarray(row_indices, dtype=np.int64)
    s = len(support)
    if s == 0:
        return (float("nan"), 0.0, support)
    return ((d - 2.0 * s) / d, -2.0 * s / d, support)


def densified_regularity(s, d) -> float:
    """Regularity constant of the reflected binary vector, closed form."""
    if not 0 < s <= d:
        if s == 0:
            raise UndefinedRegularityError("all-zero vector has no regularity value")
        raise ValueError(f"need 0 < s <= d, got s={s}, d={d}")
    if s == d:
        return 1.0  # all entries equal -1 after reflection
    if 4 * s < d:
        return d / s - 4.0 + 4.0 * s / d
    return 4.0 * s / d


@dataclass(frozen=True)
class DensifiedMatrix:
    """Reflected sparse-binary rows in two-value-per-row form."""

    n_cols: int
    indices: np.ndarray
    indptr: np.ndarray
    on_values: np.ndarray
    off_values: np.ndarray

    @property
    def n_rows(self) -> int:
        return len(self.indptr) - 1

    def row_nnz(self) -> np.ndarray:
        return np.diff(self.indptr)

    def to_dense(self) -> DenseMatrix:
        values = kernels.expand_two_valued(
            self.indices, self.indptr, self.on_values, self.off_values, self.n_cols
        )
        return DenseMatrix(values)

    def expand_rows(self, rows) -> np.ndarray:
        """Dense d-length vectors for a subset of rows."""
        rows = np.asarray(rows, dtype=np.int64)
        sub_ptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum(self.row_nnz()[rows], out=sub_ptr[1:])
        sub_idx = (
            np.concatenate(
                [self.indices[self.indptr[r] : self.indptr[r + 1]] for r in rows]
            )
            if len(rows) and sub_ptr[-1] > 0
            else np.zeros(0, dtype=np.int64)
        )
        return kernels.expand_two_valued(
            sub_idx, sub_ptr, self.on_values[rows], self.off_values[rows], self.n_cols
        )

    def rs_projected_sqnorms(self, subset) -> np.ndarray:
        """Unscaled ||Px||^2 per row for an index subset, in O(nnz).

        With n_on support indices retained out of k, the projected
        squared norm is n_on*on^2 + (k - n_on)*off^2.
        """
        member = np.zeros(self.n_cols, dtype=np.uint8)
        member[subset.indices] = 1
        n_on = kernels.retained_counts(self.indices, self.indptr, member)
        k = len(subset.indices)
        on_sq = np.where(np.isnan(self.on_values), 0.0, self.on_values) ** 2
        return n_on * on_sq + (k - n_on) * self.off_values**2


def densify_dataset(X: SparseBinaryMatrix):
    """Reflect every row; returns the compact matrix and the
    (before, after) point-basis regularity reports.

    Row norms are preserved exactly (||Hx||^2 = s); zero rows pass
    through unchanged and stay excluded from both dataset constants.
    """
    d = X.n_cols
    nnz = X.row_nnz().astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        on = np.where(nnz > 0, (d - 2.0 * nnz) / d, np.nan)
    off = np.where(nnz > 0, -2.0 * nnz / d, 0.0)
    dens = DensifiedMatrix(
        n_cols=d,
        indices=X.indices,
        indptr=X.indptr,
        on_values=on,
        off_values=off,
    )

    with np.errstate(divide="ignore"):
        c_before = np.where(nnz > 0, d / nnz, np.nan)
    c_after = np.array(
        [densified_regularity(int(s), d) if s > 0 else np.nan for s in nnz]
    )
    n_zero = int((nnz == 0).sum())
    if n_zero == X.n_rows:
        raise UndefinedRegularityError("all rows are zero")
    before = RegularityReport(
        per_row_c=c_before,
        dataset_c=float(np.nanmax(c_before)),
        n_zero_rows=n_zero,
        basis="points",
    )
    after = RegularityReport(
        per_row_c=c_after,
        dataset_c=float(np.nanmax(c_after)),
        n_zero_rows=n_zero,
        basis="points",
    )
    return dens, (before, after)


def write_compact(dens: DensifiedMatrix, path):
    """Text form: header ``d=<int> compact=hh``, then per row
    ``s on off i1 i2 ...`` with 1-based support indices."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"d={dens.n_cols} compact=hh\n")
        for i in range(dens.n_rows):
            sup = dens.indices[dens.indptr[i] : dens.indptr[i + 1]]
            on = dens.on_values[i]
            on_txt = repr(float(on)) if not np.isnan(on) else "nan"
            fields = [str(len(sup)), on_txt, repr(float(dens.off_values[i]))]
            fields += [str(int(j) + 1) for j in sup]
            fh.write(" ".join(fields) + "\n")
