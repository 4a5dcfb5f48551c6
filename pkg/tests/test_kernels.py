"""Compiled core and numpy fallback must agree exactly."""

import numpy as np
import pytest

from rsproj.kernels import _fallback, pairwise_sqdists

try:
    from rsproj.kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled core not built")


def random_sparse(rng, n, d, max_nnz):
    rows = [
        np.sort(rng.choice(d, size=rng.integers(0, max_nnz + 1), replace=False))
        for _ in range(n)
    ]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    indices = (
        np.concatenate([r.astype(np.int64) for r in rows])
        if indptr[-1]
        else np.zeros(0, dtype=np.int64)
    )
    return indices, indptr


@needs_core
class TestBackendAgreement:
    def test_retained_counts(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            d = int(rng.integers(5, 100))
            indices, indptr = random_sparse(rng, int(rng.integers(1, 30)), d, min(d, 20))
            member = (rng.random(d) < 0.4).astype(np.uint8)
            a = _core.retained_counts(indices, indptr, member)
            b = _fallback.retained_counts(indices, indptr, member)
            np.testing.assert_array_equal(a, b)

    def test_pairwise_intersections(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            d = int(rng.integers(5, 80))
            indices, indptr = random_sparse(rng, int(rng.integers(2, 25)), d, min(d, 15))
            a = _core.pairwise_intersections(indices, indptr)
            b = _fallback.pairwise_intersections(indices, indptr)
            np.testing.assert_array_equal(a, b)

    def test_subset_select_binary(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            d = int(rng.integers(5, 60))
            k = int(rng.integers(1, d + 1))
            indices, indptr = random_sparse(rng, int(rng.integers(1, 20)), d, min(d, 12))
            subset = np.sort(rng.choice(d, size=k, replace=False)).astype(np.int64)
            position = np.full(d, -1, dtype=np.int64)
            position[subset] = np.arange(k)
            a = _core.subset_select_binary(indices, indptr, position, k)
            b = _fallback.subset_select_binary(indices, indptr, position, k)
            np.testing.assert_array_equal(a, b)

    def test_expand_two_valued(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            d = int(rng.integers(2, 40))
            n = int(rng.integers(1, 15))
            indices, indptr = random_sparse(rng, n, d, min(d, 10))
            on = rng.standard_normal(n)
            off = rng.standard_normal(n)
            a = _core.expand_two_valued(indices, indptr, on, off, d)
            b = _fallback.expand_two_valued(indices, indptr, on, off, d)
            np.testing.assert_array_equal(a, b)


class TestPairwiseSqdists:
    def test_against_naive_loop(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((12, 7))
        got = pairwise_sqdists(x)
        m = 0
        for i in range(12):
            for j in range(i + 1, 12):
                expect = ((x[i] - x[j]) ** 2).sum()
                assert got[m] == pytest.approx(expect, rel=1e-10)
                m += 1

    def test_identical_rows_give_zero(self):
        x = np.ones((3, 5))
        np.testing.assert_array_equal(pairwise_sqdists(x), np.zeros(3))

    def test_never_negative(self):
        rng = np.random.default_rng(5)
        base = rng.standard_normal(40)
        x = np.vstack([base + 1e-9 * rng.standard_normal(40) for _ in range(10)])
        assert np.all(pairwise_sqdists(x) >= 0.0)


def test_intersections_handle_empty_rows():
    indices = np.array([0, 1], dtype=np.int64)
    indptr = np.array([0, 0, 2, 2], dtype=np.int64)
    out = _fallback.pairwise_intersections(indices, indptr)
    np.testing.assert_array_equal(out, [0, 0, 0])
    if _core is not None:
        np.testing.assert_array_equal(
            _core.pairwise_intersections(indices, indptr), out
        )
