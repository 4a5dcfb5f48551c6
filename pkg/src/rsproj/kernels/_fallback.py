"""Pure numpy fallbacks for the compiled sparse-row kernels."""

import numpy as np


def retained_counts(indices, indptr, member):
    hits = member[indices].astype(np.int64)
    cs = np.concatenate([[0], np.cumsum(hits)])
    return cs[indptr[1:]] - cs[indptr[:-1]]


def pairwise_intersections(indices, indptr):
    import scipy.sparse as sp

    n = len(indptr) - 1
    d = int(indices.max()) + 1 if len(indices) else 1
    a = sp.csr_matrix(
        (np.ones(len(indices), dtype=np.int64), indices, indptr), shape=(n, d)
    )
    gram = (a @ a.T).toarray()
    iu = np.triu_indices(n, k=1)
    return gram[iu].astype(np.int64)


def subset_select_binary(indices, indptr, position, k):
    n = len(indptr) - 1
    out = np.zeros((n, k), dtype=np.float64)
    if len(indices) == 0:
        return out
    rows = np.repeat(np.arange(n), np.diff(indptr))
    pos = position[indices]
    keep = pos >= 0
    out[rows[keep], pos[keep]] = 1.0
    return out


def expand_two_valued(indices, indptr, on_values, off_values, d):
    n = len(indptr) - 1
    out = np.repeat(off_values[:, None], d, axis=1)
    if len(indices):
        rows = np.repeat(np.arange(n), np.diff(indptr))
        out[rows, indices] = on_values[rows]
    return out
