"""Distortion, coverage, and runtime experiments.

Everything is driven by one master seed: each cell of a sweep draws its
generator from (master_seed, method, k, repeat) and each repeat re-draws
its evaluation rows from (master_seed, "eval", repeat), shared across
methods and k so curves stay comparable. Reports are bit-reproducible
apart from the wall-clock columns.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bounds import required_k_basic, required_k_serfling
from .densify import densify_dataset
from .matrixio import DenseMatrix, SparseBinaryMatrix
from .projections import (
    apply_operator,
    gaussian_rp_matrix,
    pca_operator,
    rs_operator,
    rs_project,
    rs_sample_indices,
    sparse_rp_matrix,
)
from .regularity import regularity_of_dataset
from .seeding import child_rng

METHODS = ("rs", "rp", "srp", "pca", "rs_hh")


@dataclass(frozen=True)
class ExperimentConfig:
    methods: tuple = ("rs", "rp", "srp")
    k_grid: tuple = tuple(range(5, 601, 5))
    n_eval_points: int = 100
    repeats: int = 1
    master_seed: int = 0
    epsilon: float = 0.5
    srp_scale: str = "paper"  # or "unbiased"
    orthonormalize_rp: bool = True
    collect_raw: bool = False

    def __post_init__(self):
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        if any(k < 1 for k in self.k_grid):
            raise ValueError("k_grid values must be >= 1")
        if self.n_eval_points < 2:
            raise ValueError("n_eval_points must be >= 2")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


@dataclass(frozen=True)
class PairStats:
    mean_ratio: float
    p5: float
    p95: float
    fail_rate_sq: float
    n_pairs: int
    n_skipped: int


@dataclass(frozen=True)
class SweepRow:
    method: str
    k: int
    repeat: int
    stats: PairStats
    build_ns: int
    apply_ns: int


@dataclass
class DistortionReport:
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (method, k, repeat, reason)
    raw: list = field(default_factory=list)  # (method, k, repeat, u, v, ratio)

    def to_csv(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write(
                "method,k,repeat,mean_ratio,p5,p95,fail_rate_sq,"
                "n_pairs,n_skipped,build_ns,apply_ns\n"
            )
            for r in self.rows:
                s = r.stats
                fh.write(
                    f"{r.method},{r.k},{r.repeat},{s.mean_ratio!r},{s.p5!r},"
                    f"{s.p95!r},{s.fail_rate_sq!r},{s.n_pairs},{s.n_skipped},"
                    f"{r.build_ns},{r.apply_ns}\n"
                )

    def raw_to_csv(self, path):
        with open(path, "w", newline="\n") as fh:
            fh.write("method,k,repeat,pair_u,pair_v,ratio\n")
            for method, k, rep, u, v, ratio in self.raw:
                fh.write(f"{method},{k},{rep},{u},{v},{ratio!r}\n")


def nearest_rank_percentile(sorted_vals, p) -> float:
    """p-th percentile by the nearest-rank rule (no interpolation)."""
    n = len(sorted_vals)
    if n == 0:
        raise ValueError("no values")
    rank = max(1, math.ceil(p / 100.0 * n))
    return float(sorted_vals[min(rank, n) - 1])


def _condensed_pair_index(n):
    return np.triu_indices(n, k=1)


def _orig_sqdists(X, eval_rows) -> np.ndarray:
    """Condensed squared distances between the chosen rows."""
    if isinstance(X, SparseBinaryMatrix):
        sub = X.take_rows(eval_rows)
        inter = kernels.pairwise_intersections(sub.indices, sub.indptr)
        nnz = sub.row_nnz().astype(np.float64)
        iu, ju = _condensed_pair_index(len(eval_rows))
        return nnz[iu] + nnz[ju] - 2.0 * inter
    return kernels.pairwise_sqdists(X.values[eval_rows])


def _stats_from_sqdists(orig_sq, proj_sq, epsilon) -> tuple:
    """Ratio statistics plus the raw ratio vector and its pair mask."""
    usable = orig_sq > 0.0
    n_skipped = int((~usable).sum())
    if usable.sum() < 2:
        raise ValueError("fewer than 2 usable pairs")
    sq_ratio = proj_sq[usable] / orig_sq[usable]
    ratios = np.sqrt(sq_ratio)
    srt = np.sort(ratios)
    stats = PairStats(
        mean_ratio=float(ratios.mean()),
        p5=nearest_rank_percentile(srt, 5),
        p95=nearest_rank_percentile(srt, 95),
        fail_rate_sq=float((np.abs(sq_ratio - 1.0) > epsilon).mean()),
        n_pairs=int(usable.sum()),
        n_skipped=n_skipped,
    )
    return stats, ratios, usable


def pairwise_ratio_stats(X, op, eval_rows, epsilon) -> PairStats:
    """Distribution of scaled-projected/original distance ratios over all
    unordered pairs of the evaluation rows. Pairs at zero original
    distance are skipped and counted; the failure rate counts pairs with
    |ratio^2 - 1| > epsilon."""
    eval_rows = np.asarray(eval_rows, dtype=np.int64)
    if len(np.unique(eval_rows)) != len(eval_rows):
        raise ValueError("eval_rows must be distinct")
    if op.d != X.n_cols:
        raise ValueError(f"operator is over d={op.d}, data has d={X.n_cols}")
    orig_sq = _orig_sqdists(X, eval_rows)
    sub = X.take_rows(eval_rows) if isinstance(X, SparseBinaryMatrix) else DenseMatrix(
        X.values[eval_rows]
    )
    proj = apply_operator(op, sub, apply_scale=True)
    proj_sq = kernels.pairwise_sqdists(proj.values)
    stats, _, _ = _stats_from_sqdists(orig_sq, proj_sq, epsilon)
    return stats


def _rs_apply_densified(X, off_values, subset, scale) -> np.ndarray:
    """Column-select the reflected rows without expanding them:
    P(Hx) = P(binary x) + off * 1_k, done in O(nnz + N k)."""
    selected = rs_project(X, subset, apply_scale=False).values
    return (selected + off_values[:, None]) * scale


class _SweepContext:
    """Per-dataset state shared by all sweep cells."""

    def __init__(self, X, config):
        self.X = X
        self.config = config
        self.is_sparse = isinstance(X, SparseBinaryMatrix)
        self.dens = None
        self.dens_off = None
        if "rs_hh" in config.methods and self.is_sparse:
            self.dens, _ = densify_dataset(X)
            self.dens_off = self.dens.off_values
        n = X.n_rows
        if config.n_eval_points > n:
            raise ValueError(
                f"n_eval_points={config.n_eval_points} exceeds n_rows={n}"
            )
        self.eval_rows = {}
        self.orig_sq = {}
        for rep in range(config.repeats):
            rng = child_rng(config.master_seed, "eval", rep)
            rows = np.sort(rng.choice(n, size=config.n_eval_points, replace=False))
            self.eval_rows[rep] = rows
            self.orig_sq[rep] = _orig_sqdists(X, rows)

    def feasibility(self, method, k):
        d = self.X.n_cols
        n = self.X.n_rows
        if method in ("rs", "rs_hh") and k > d:
            return f"k={k} exceeds d={d}"
        if method == "rs_hh" and not self.is_sparse:
            return "rs_hh needs sparse binary input"
        if method == "pca":
            if self.is_sparse:
                return "pca is not run on sparse input"
            if k > min(d, n):
                return f"k={k} exceeds min(d, n_rows)={min(d, n)}"
        if method == "rp" and self.config.orthonormalize_rp and k > d:
            return f"k={k} exceeds d={d} for orthonormalized rp"
        return None

    def run_cell(self, method, k, rep):
        cfg = self.config
        X = self.X
        d = X.n_cols
        rng = child_rng(cfg.master_seed, method, k, rep)

        t0 = time.perf_counter_ns()
        if method in ("rs", "rs_hh"):
            subset = rs_sample_indices(d, k, rng)
            op = None
        elif method == "rp":
            op = gaussian_rp_matrix(d, k, cfg.orthonormalize_rp, rng)
        elif method == "srp":
            op = sparse_rp_matrix(d, k, rng, scale_mode=cfg.srp_scale)
        else:  # pca
            op = pca_operator(X, k)
        t1 = time.perf_counter_ns()

        scale = math.sqrt(d / k)
        if method == "rs":
            proj_full = rs_project(X, subset, apply_scale=True).values
        elif method == "rs_hh":
            proj_full = _rs_apply_densified(X, self.dens_off, subset, scale)
        else:
            proj_full = apply_operator(op, X, apply_scale=True).values
        t2 = time.perf_counter_ns()

        rows = self.eval_rows[rep]
        proj_sq = kernels.pairwise_sqdists(proj_full[rows])
        stats, ratios, usable = _stats_from_sqdists(
            self.orig_sq[rep], proj_sq, cfg.epsilon
        )
        raw = []
        if cfg.collect_raw:
            iu, ju = _condensed_pair_index(len(rows))
            us, vs = rows[iu[usable]], rows[ju[usable]]
            raw = [
                (method, k, rep, int(u), int(v), float(r))
                for u, v, r in zip(us, vs, ratios)
            ]
        return SweepRow(method, k, rep, stats, t1 - t0, t2 - t1), raw


def distortion_sweep(X, config, n_threads=1) -> DistortionReport:
    """Run every (method, k, repeat) cell and collect ratio statistics.

    Infeasible cells are recorded as skipped, not fatal. With n_threads
    > 1 cells run concurrently; outputs are merged in deterministic
    order and are identical to a serial run.
    """
    ctx = _SweepContext(X, config)
    report = DistortionReport()
    cells = []
    for method in config.methods:
        for k in config.k_grid:
            for rep in range(config.repeats):
                reason = ctx.feasibility(method, k)
                if reason is not None:
                    report.skipped.append((method, k, rep, reason))
                else:
                    cells.append((method, k, rep))
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(lambda c: ctx.run_cell(*c), cells))
    else:
        results = [ctx.run_cell(*c) for c in cells]
    for row, raw in results:
        report.rows.append(row)
        report.raw.extend(raw)
    return report


@dataclass(frozen=True)
class CoverageResult:
    feasible: bool
    k: int
    c: float
    epsilon: float
    delta: float
    n_seeds: int
    observed_rate: float  # NaN when infeasible
    bound: float  # delta for the norm check, 2*delta for dot products


def _difference_c(X, master_seed, n_pairs):
    report = regularity_of_dataset(
        X, basis="sampled_differences", n_pairs=n_pairs, rng=child_rng(master_seed, "cdiff")
    )
    return report.dataset_c


def jll_failure_rate(
    X, epsilon, delta, n_seeds, variant="serfling", master_seed=0, n_pairs_c=1000
) -> CoverageResult:
    """Fraction of subset draws in which any evaluated pair leaves the
    squared-distance band (1 +- epsilon); the guarantee promises at most
    delta, and the observed rate is usually far below it."""
    c = _difference_c(X, master_seed, n_pairs_c)
    n = X.n_rows
    d = X.n_cols
    if variant == "serfling":
        res = required_k_serfling(c, epsilon, delta, n, d)
    elif variant == "basic":
        res = required_k_basic(c, epsilon, delta, n, d=d)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if not res.feasible:
        return CoverageResult(False, res.k, c, epsilon, delta, n_seeds, float("nan"), delta)
    k = res.k
    all_rows = np.arange(n)
    orig_sq = _orig_sqdists(X, all_rows)
    usable = orig_sq > 0
    failures = 0
    for s in range(n_seeds):
        subset = rs_sample_indices(d, k, child_rng(master_seed, "jll", s))
        proj = rs_project(X, subset, apply_scale=True)
        proj_sq = kernels.pairwise_sqdists(proj.values)
        sq_ratio = proj_sq[usable] / orig_sq[usable]
        if np.any(np.abs(sq_ratio - 1.0) > epsilon):
            failures += 1
    return CoverageResult(
        True, k, c, epsilon, delta, n_seeds, failures / n_seeds, delta
    )


def dot_product_failure_rate(
    X, epsilon, delta, n_seeds, variant="serfling", master_seed=0, n_pairs_c=1000
) -> CoverageResult:
    """Fraction of subset draws in which any pair's rescaled projected
    inner product leaves dot(x_i, x_j) +- epsilon*||x_i||*||x_j||;
    bounded by 2*delta when k comes from the norm bound at delta."""
    c = _difference_c(X, master_seed, n_pairs_c)
    n = X.n_rows
    d = X.n_cols
    if variant == "serfling":
        res = required_k_serfling(c, epsilon, delta, n, d)
    elif variant == "basic":
        res = required_k_basic(c, epsilon, delta, n, d=d)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if not res.feasible:
        return CoverageResult(
            False, res.k, c, epsilon, delta, n_seeds, float("nan"), 2 * delta
        )
    k = res.k
    values = X.to_dense().values if isinstance(X, SparseBinaryMatrix) else X.values
    gram = values @ values.T
    norms = np.sqrt(np.diag(gram))
    half_width = epsilon * np.outer(norms, norms)
    iu = np.triu_indices(n, k=1)
    failures = 0
    for s in range(n_seeds):
        subset = rs_sample_indices(d, k, child_rng(master_seed, "dot", s))
        proj = values[:, subset.indices]
        gram_p = (d / k) * (proj @ proj.T)
        if np.any(np.abs(gram_p[iu] - gram[iu]) > half_width[iu]):
            failures += 1
    return CoverageResult(
        True, k, c, epsilon, delta, n_seeds, failures / n_seeds, 2 * delta
    )


def one_hot_zero_probability(d, k, n_seeds, master_seed=0) -> float:
    """Empirical probability that a one-hot vector projects to zero,
    i.e. that the subset misses its single non-zero coordinate. The
    exact value is (d-k)/d."""
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    rng = child_rng(master_seed, "onehot")
    misses = 0
    for _ in range(n_seeds):
        subset = rs_sample_indices(d, k, rng)
        if 0 not in subset.indices:
            misses += 1
    return misses / n_seeds


@dataclass(frozen=True)
class BenchRow:
    method: str
    k: int
    build_ns: int  # median over repeats
    apply_ns: int


def _median_ns(values) -> int:
    return int(np.median(np.asarray(values)))


def runtime_benchmark(
    d,
    k_grid,
    n_rows,
    methods,
    repeats=5,
    data_kind="dense",
    density=0.1,
    master_seed=0,
) -> list:
    """Wall-clock build/apply medians on internally generated data.

    data_kind "dense" draws standard-normal rows; "sparse" draws binary
    rows at the given density (needed for rs_hh).
    """
    rng = child_rng(master_seed, "benchdata")
    if data_kind == "dense":
        X = DenseMatrix(rng.standard_normal((n_rows, d)))
    elif data_kind == "sparse":
        rows = [np.nonzero(rng.random(d) < density)[0] for _ in range(n_rows)]
        X = SparseBinaryMatrix.from_rows(rows, d)
    else:
        raise ValueError(f"unknown data_kind {data_kind!r}")
    dens_off = None
    if "rs_hh" in methods:
        if data_kind != "sparse":
            raise ValueError("rs_hh benchmarks need sparse data")
        dens, _ = densify_dataset(X)
        dens_off = dens.off_values

    out = []
    for method in methods:
        for k in k_grid:
            builds, applies = [], []
            for rep in range(repeats):
                cell_rng = child_rng(master_seed, method, k, rep)
                t0 = time.perf_counter_ns()
                if method in ("rs", "rs_hh"):
                    if method == "rs_hh":
                        # the O(nnz) reflection is part of the cost
                        densify_dataset(X)
                    subset = rs_sample_indices(d, k, cell_rng)
                elif method == "rp":
                    op = gaussian_rp_matrix(d, k, True, cell_rng)
                elif method == "srp":
                    op = sparse_rp_matrix(d, k, cell_rng)
                elif method == "pca":
                    op = pca_operator(X, k)
                else:
                    raise ValueError(f"unknown method {method!r}")
                t1 = time.perf_counter_ns()
                if method == "rs":
                    rs_project(X, subset, apply_scale=True)
                elif method == "rs_hh":
                    _rs_apply_densified(X, dens_off, subset, math.sqrt(d / k))
                else:
                    apply_operator(op, X, apply_scale=True)
                t2 = time.perf_counter_ns()
                builds.append(t1 - t0)
                applies.append(t2 - t1)
            out.append(BenchRow(method, k, _median_ns(builds), _median_ns(applies)))
    return out


def bench_to_csv(rows, path):
    with open(path, "w", newline="\n") as fh:
        fh.write("method,k,build_ns,apply_ns\n")
        for r in rows:
            fh.write(f"{r.method},{r.k},{r.build_ns},{r.apply_ns}\n")
