import numpy as np
import pytest

from rsproj.matrixio import (
    DenseMatrix,
    GrayImage,
    ParseError,
    SparseBinaryMatrix,
    load_dense_csv,
    load_pgm,
    load_sparse_binary,
    sample_image_windows,
    write_dense_csv,
)


class TestDenseCsv:
    def test_basic(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,2\n3,4\n")
        m = load_dense_csv(p)
        np.testing.assert_array_equal(m.values, [[1, 2], [3, 4]])

    def test_header_skipped(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("a,b\n1,2\n")
        m = load_dense_csv(p, has_header=True)
        np.testing.assert_array_equal(m.values, [[1, 2]])

    def test_ragged_row_reports_line(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,2\n3\n")
        with pytest.raises(ParseError) as exc:
            load_dense_csv(p)
        assert exc.value.line == 2

    def test_non_numeric_field(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,2\n3,x\n")
        with pytest.raises(ParseError) as exc:
            load_dense_csv(p)
        assert exc.value.line == 2

    def test_empty_file(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("")
        with pytest.raises(ParseError):
            load_dense_csv(p)

    def test_crlf(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_bytes(b"1,2\r\n3,4\r\n")
        np.testing.assert_array_equal(load_dense_csv(p).values, [[1, 2], [3, 4]])

    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        m = DenseMatrix(rng.standard_normal((17, 9)) * 10 ** rng.integers(-8, 8))
        p = tmp_path / "rt.csv"
        write_dense_csv(m, p)
        back = load_dense_csv(p)
        np.testing.assert_array_equal(back.values, m.values)

    def test_non_finite_rejected(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("1,inf\n")
        with pytest.raises(ParseError):
            load_dense_csv(p)


class TestSparse:
    def test_basic(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=5\n1 3 5\n")
        m = load_sparse_binary(p)
        assert m.n_cols == 5 and m.n_rows == 1
        np.testing.assert_array_equal(m.row(0), [0, 2, 4])

    def test_empty_row_allowed(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=3\n\n2\n")
        m = load_sparse_binary(p)
        assert m.n_rows == 2
        assert len(m.row(0)) == 0
        np.testing.assert_array_equal(m.row(1), [1])

    def test_out_of_range(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=3\n4\n")
        with pytest.raises(ParseError) as exc:
            load_sparse_binary(p)
        assert exc.value.line == 2

    def test_zero_index_rejected(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=3\n0 1\n")
        with pytest.raises(ParseError):
            load_sparse_binary(p)

    def test_missing_header(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("1 2 3\n")
        with pytest.raises(ParseError) as exc:
            load_sparse_binary(p)
        assert exc.value.line == 1

    def test_duplicates_warn_and_dedupe(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=4\n2 2 3\n")
        with pytest.warns(UserWarning, match="1 duplicate"):
            m = load_sparse_binary(p)
        np.testing.assert_array_equal(m.row(0), [1, 2])

    def test_unsorted_input_sorted(self, tmp_path):
        p = tmp_path / "s.txt"
        p.write_text("d=4\n3 1\n")
        m = load_sparse_binary(p)
        np.testing.assert_array_equal(m.row(0), [0, 2])

    def test_to_dense(self):
        m = SparseBinaryMatrix.from_rows([[0, 2], []], 3)
        np.testing.assert_array_equal(m.to_dense().values, [[1, 0, 1], [0, 0, 0]])

    def test_take_rows(self):
        m = SparseBinaryMatrix.from_rows([[0], [1], [2]], 3)
        sub = m.take_rows([2, 0])
        np.testing.assert_array_equal(sub.row(0), [2])
        np.testing.assert_array_equal(sub.row(1), [0])


def make_p2(width, height, maxval, pixels):
    return f"P2\n{width} {height}\n{maxval}\n" + " ".join(map(str, pixels))


def make_p5(width, height, maxval, pixels):
    head = f"P5\n{width} {height}\n{maxval}\n".encode()
    if maxval < 256:
        return head + bytes(pixels)
    return head + b"".join(int(p).to_bytes(2, "big") for p in pixels)


class TestPgm:
    def test_p2(self, tmp_path):
        p = tmp_path / "a.pgm"
        p.write_text(make_p2(2, 2, 255, [0, 10, 20, 30]))
        img = load_pgm(p)
        assert (img.width, img.height, img.max_val) == (2, 2, 255)
        np.testing.assert_array_equal(img.pixels, [0, 10, 20, 30])

    def test_p5_equivalent(self, tmp_path):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        a.write_text(make_p2(2, 2, 255, [0, 10, 20, 30]))
        b.write_bytes(make_p5(2, 2, 255, [0, 10, 20, 30]))
        ia, ib = load_pgm(a), load_pgm(b)
        np.testing.assert_array_equal(ia.pixels, ib.pixels)
        assert ia.width == ib.width and ia.max_val == ib.max_val

    def test_p3_rejected(self, tmp_path):
        p = tmp_path / "a.pgm"
        p.write_text("P3\n1 1\n255\n0 0 0")
        with pytest.raises(ParseError, match="P3"):
            load_pgm(p)

    def test_truncated_p5(self, tmp_path):
        p = tmp_path / "a.pgm"
        p.write_bytes(b"P5\n2 2\n255\n\x00\x01")
        with pytest.raises(ParseError, match="truncated"):
            load_pgm(p)

    def test_comments_skipped(self, tmp_path):
        p = tmp_path / "a.pgm"
        p.write_text("P2\n# a comment\n2 1\n255\n5 6")
        img = load_pgm(p)
        np.testing.assert_array_equal(img.pixels, [5, 6])

    def test_16_bit(self, tmp_path):
        p = tmp_path / "a.pgm"
        p.write_bytes(make_p5(2, 1, 65535, [300, 65535]))
        img = load_pgm(p)
        np.testing.assert_array_equal(img.pixels, [300, 65535])


class TestWindows:
    def test_single_valid_corner(self):
        rng = np.random.default_rng(0)
        img = GrayImage(50, 50, np.arange(2500) % 256, 255)
        m = sample_image_windows(img, 50, 3, rng)
        assert m.n_rows == 3 and m.n_cols == 2500
        np.testing.assert_array_equal(m.values[0], m.values[1])
        np.testing.assert_array_equal(m.values[0], img.pixels.astype(float))

    def test_shape_at_paper_scale(self):
        rng = np.random.default_rng(1)
        img = GrayImage(256, 256, np.zeros(256 * 256, dtype=int), 255)
        m = sample_image_windows(img, 50, 1000, rng)
        assert (m.n_rows, m.n_cols) == (1000, 2500)

    def test_too_large_window(self):
        img = GrayImage(256, 256, np.zeros(256 * 256, dtype=int), 255)
        with pytest.raises(ValueError):
            sample_image_windows(img, 300, 1, np.random.default_rng(0))

    def test_seed_reproducible(self):
        img = GrayImage(64, 64, np.arange(64 * 64) % 251, 255)
        a = sample_image_windows(img, 10, 20, np.random.default_rng(9))
        b = sample_image_windows(img, 10, 20, np.random.default_rng(9))
        np.testing.assert_array_equal(a.values, b.values)

    def test_rows_are_contiguous_blocks(self):
        rng = np.random.default_rng(2)
        pixels = rng.integers(0, 256, size=64 * 48)
        img = GrayImage(64, 48, pixels, 255)
        grid = pixels.reshape(48, 64)
        m = sample_image_windows(img, 7, 25, np.random.default_rng(3))
        for row in m.values:
            block = row.reshape(7, 7)
            found = any(
                np.array_equal(grid[y : y + 7, x : x + 7], block)
                for y in range(48 - 6)
                for x in range(64 - 6)
            )
            assert found


class TestTypes:
    def test_dense_requires_finite(self):
        with pytest.raises(ValueError):
            DenseMatrix(np.array([[np.nan]]))

    def test_sparse_validates_monotone(self):
        with pytest.raises(ValueError):
            SparseBinaryMatrix(
                n_cols=4,
                indices=np.array([2, 1]),
                indptr=np.array([0, 2]),
            )

    def test_sparse_validates_range(self):
        with pytest.raises(ValueError):
            SparseBinaryMatrix.from_rows([[5]], 4)

    def test_gray_image_validates_count(self):
        with pytest.raises(ValueError):
            GrayImage(2, 2, np.zeros(3, dtype=int), 255)
