"""Data ingestion: dense CSV, sparse binary index lists, PGM images.

All loaders validate eagerly and raise :class:`ParseError` with the
offending line number; matrices are immutable after construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class ParseError(ValueError):
    """Malformed input file; carries the path and 1-based line number."""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


@dataclass(frozen=True)
class DenseMatrix:
    """N observations by d real features, row-major."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected a 2-d array, got ndim={v.ndim}")
        if not np.all(np.isfinite(v)):
            raise ValueError("matrix contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """Binary rows stored CSR-style as sorted 0-based column indices."""

    n_cols: int
    indices: np.ndarray
    indptr: np.ndarray

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        ptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        if ptr[0] != 0 or ptr[-1] != len(idx) or np.any(np.diff(ptr) < 0):
            raise ValueError("malformed indptr")
        if len(idx) and (idx.min() < 0 or idx.max() >= self.n_cols):
            raise ValueError("column index out of range")
        for i in range(len(ptr) - 1):
            row = idx[ptr[i] : ptr[i + 1]]
            if len(row) > 1 and np.any(np.diff(row) <= 0):
                raise ValueError(f"row {i} indices not strictly increasing")
        idx.setflags(write=False)
        ptr.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "indptr", ptr)

    @classmethod
    def from_rows(cls, rows, n_cols) -> "SparseBinaryMatrix":
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum([len(r) for r in rows], out=indptr[1:])
        indices = (
            np.concatenate([np.asarray(r, dtype=np.int64) for r in rows])
            if rows and indptr[-1] > 0
            else np.zeros(0, dtype=np.int64)
        )
        return cls(n_cols=n_cols, indices=indices, indptr=indptr)

    @property
    def n_rows(self) -> int:
        return len(self.indptr) - 1

    def row(self, i) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def row_nnz(self) -> np.ndarray:
        return np.diff(self.indptr)

    def take_rows(self, rows) -> "SparseBinaryMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        return SparseBinaryMatrix.from_rows([self.row(i) for i in rows], self.n_cols)

    def to_dense(self) -> DenseMatrix:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.float64)
        rows = np.repeat(np.arange(self.n_rows), self.row_nnz())
        out[rows, self.indices] = 1.0
        return DenseMatrix(out)


@dataclass(frozen=True)
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # length width*height, row-major
    max_val: int = 255

    def __post_init__(self):
        px = np.ascontiguousarray(self.pixels, dtype=np.int64)
        if len(px) != self.width * self.height:
            raise ValueError("pixel count does not match width*height")
        if len(px) and (px.min() < 0 or px.max() > self.max_val):
            raise ValueError("pixel intensity outside [0, max_val]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)


def load_dense_csv(path, has_header=False) -> DenseMatrix:
    """Parse comma-separated reals, one observation per line.

    Accepts LF or CRLF endings and an optional single header line; every
    data line must have the same field count.
    """
    with open(path, "r", newline="") as fh:
        lines = fh.read().splitlines()
    rows = []
    width = None
    start = 1 if has_header else 0
    for lineno, line in enumerate(lines, start=1):
        if lineno <= start:
            continue
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(path, lineno, f"expected {width} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise ParseError(path, lineno, "non-numeric field") from None
    if not rows:
        raise ParseError(path, 1, "no data rows")
    values = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ParseError(path, 1, "non-finite value in data")
    return DenseMatrix(values)


def write_dense_csv(matrix, path, header=None):
    """Write with repr-exact decimal formatting so a reload round-trips."""
    values = matrix.values if isinstance(matrix, DenseMatrix) else np.asarray(matrix)
    with open(path, "w", newline="\n") as fh:
        if header is not None:
            fh.write(",".join(header) + "\n")
        for row in values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_sparse_binary(path) -> SparseBinaryMatrix:
    """Header line ``d=<int>``, then one observation per line of
    whitespace-separated 1-based indices (an empty line is an all-zero
    row). Duplicate indices are dropped with a warning."""
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("d="):
        raise ParseError(path, 1, "missing 'd=<int>' header")
    try:
        d = int(lines[0][2:])
    except ValueError:
        raise ParseError(path, 1, "malformed dimension header") from None
    if d <= 0:
        raise ParseError(path, 1, "dimension must be positive")
    rows = []
    n_dupes = 0
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split()
        try:
            raw = [int(f) for f in fields]
        except ValueError:
            raise ParseError(path, lineno, "non-integer index") from None
        for v in raw:
            if v < 1 or v > d:
                raise ParseError(path, lineno, f"index {v} outside [1, {d}]")
        uniq = sorted(set(raw))
        n_dupes += len(raw) - len(uniq)
        rows.append(np.asarray(uniq, dtype=np.int64) - 1)
    if n_dupes:
        warnings.warn(f"{path}: removed {n_dupes} duplicate indices", stacklevel=2)
    return SparseBinaryMatrix.from_rows(rows, d)


def write_sparse_binary(matrix, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(f"d={matrix.n_cols}\n")
        for i in range(matrix.n_rows):
            fh.write(" ".join(str(int(j) + 1) for j in matrix.row(i)) + "\n")


def _pgm_tokens(data):
    """Yield header tokens, skipping whitespace and # comments."""
    i = 0
    n = len(data)
    while i < n:
        c = data[i : i + 1]
        if c in b" \t\r\n":
            i += 1
        elif c == b"#":
            while i < n and data[i : i + 1] != b"\n":
                i += 1
        else:
            j = i
            while j < n and data[j : j + 1] not in b" \t\r\n":
                j += 1
            yield data[i:j], j
            i = j


def load_pgm(path) -> GrayImage:
    """Read a P2 (ASCII) or P5 (binary) PGM, max_val up to 65535."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = _pgm_tokens(data)
    try:
        magic, _ = next(tokens)
    except StopIteration:
        raise ParseError(path, 1, "empty file") from None
    if magic not in (b"P2", b"P5"):
        raise ParseError(path, 1, f"unsupported magic {magic!r}, expected P2 or P5")
    try:
        (w, _), (h, _), (maxval, end) = next(tokens), next(tokens), next(tokens)
        width, height, max_val = int(w), int(h), int(maxval)
    except (StopIteration, ValueError):
        raise ParseError(path, 1, "malformed PGM header") from None
    if width <= 0 or height <= 0 or not (0 < max_val <= 65535):
        raise ParseError(path, 1, "invalid PGM dimensions or max value")
    n_px = width * height
    if magic == b"P2":
        try:
            px = np.array(data[end:].split(), dtype=np.int64)
        except ValueError:
            raise ParseError(path, 1, "non-integer pixel value") from None
        if len(px) != n_px:
            raise ParseError(path, 1, f"expected {n_px} pixels, got {len(px)}")
    else:
        payload = data[end + 1 :]  # single whitespace after max_val
        bytes_per = 1 if max_val < 256 else 2
        if len(payload) < n_px * bytes_per:
            raise ParseError(path, 1, "truncated pixel data")
        payload = payload[: n_px * bytes_per]
        dtype = np.uint8 if bytes_per == 1 else np.dtype(">u2")
        px = np.frombuffer(payload, dtype=dtype).astype(np.int64)
    if len(px) and (px.min() < 0 or px.max() > max_val):
        raise ParseError(path, 1, "pixel intensity outside [0, max_val]")
    return GrayImage(width=width, height=height, pixels=px, max_val=max_val)


def sample_image_windows(img, window, count, rng) -> DenseMatrix:
    """Stack ``count`` square windows with uniformly random top-left
    corners (drawn with replacement), each flattened row-major.

    Intensities are used as-is, no normalization.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > img.width or window > img.height:
        raise ValueError(
            f"window {window} exceeds image size {img.width}x{img.height}"
        )
    if count < 1:
        raise ValueError("count must be >= 1")
    grid = img.pixels.reshape(img.height, img.width).astype(np.float64)
    xs = rng.integers(0, img.width - window + 1, size=count)
    ys = rng.integers(0, img.height - window + 1, size=count)
    out = np.empty((count, window * window), dtype=np.float64)
    for i, (x, y) in enumerate(zip(xs, ys)):
        out[i] = grid[y : y + window, x : x + window].ravel()
    return DenseMatrix(out)
