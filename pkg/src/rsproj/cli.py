"""Command-line front end: one executable, one subcommand per operation.

Every subcommand accepts ``--config FILE`` holding ``key = value`` lines
(# comments allowed); explicit flags override config values. Exit codes:
0 success, 1 validation error, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from .bounds import achievable_epsilon, required_k_basic, required_k_serfling
from .densify import densify_dataset, write_compact
from .matrixio import (
    ParseError,
    load_dense_csv,
    load_pgm,
    load_sparse_binary,
    sample_image_windows,
    write_dense_csv,
)
from .projections import (
    apply_operator,
    gaussian_rp_matrix,
    pca_operator,
    rs_operator,
    sparse_rp_matrix,
)
from .regularity import regularity_of_dataset
from .seeding import child_rng


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


# flags that must be present after merging config-file defaults;
# argparse's required=True would reject config-only invocations
_REQUIRED = {
    "regularity": ("input",),
    "bound": ("c", "epsilon", "delta", "n"),
    "project": ("input", "method", "k", "output"),
    "densify": ("input", "output"),
    "windows": ("input", "output"),
    "distort": ("input", "output"),
    "jllcheck": ("input",),
    "dotcheck": ("input",),
    "bench": ("output",),
}


def _add_input_flags(p, formats=("csv", "sparse")):
    p.add_argument("--input", help="input data file")
    p.add_argument(
        "--format", choices=formats, default=formats[0], help="input file format"
    )
    p.add_argument(
        "--has-header", action="store_true", help="skip one CSV header line"
    )


def _load_input(args):
    if args.format == "csv":
        return load_dense_csv(args.input, has_header=args.has_header)
    if args.format == "sparse":
        return load_sparse_binary(args.input)
    raise ValueError(f"unknown format {args.format!r}")


def _parse_k_grid(text):
    """Either 'start:stop:step' (inclusive stop) or comma-separated ints."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("k grid range must be start:stop:step")
        start, stop, step = (int(p) for p in parts)
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(","))


def _parse_methods(text):
    return tuple(m.strip() for m in text.split(",") if m.strip())


def build_parser():
    parser = _Parser(prog="rsproj", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}

    def add(name, **kw):
        p = sub.add_parser(
            name, formatter_class=argparse.ArgumentDefaultsHelpFormatter, **kw
        )
        p.add_argument("--config", help="key = value config file")
        parsers[name] = p
        return p

    p = add("regularity", help="regularity constant of a dataset")
    _add_input_flags(p)
    p.add_argument(
        "--basis",
        choices=["points", "differences"],
        default="points",
        help="rows themselves, or sampled row differences",
    )
    p.add_argument("--pairs", type=int, default=1000, help="sampled pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-row", help="write per-row c values to this CSV")

    p = add("bound", help="required projection dimension")
    p.add_argument("--c", type=float, help="regularity constant")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--n", type=int, help="number of points")
    p.add_argument("--d", type=int, help="ambient dimension")
    p.add_argument("--variant", choices=["basic", "serfling"], default="basic")
    p.add_argument(
        "--invert-k",
        type=int,
        help="also report the achievable epsilon at this k",
    )

    p = add("project", help="project a dataset")
    _add_input_flags(p)
    p.add_argument("--method", choices=["rs", "rp", "srp", "pca"])
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument(
        "--srp-scale", choices=["paper", "unbiased"], default="paper"
    )
    p.add_argument(
        "--orthonormalize", action=argparse.BooleanOptionalAction, default=True,
        help="orthonormalize gaussian rp rows",
    )
    p.add_argument("--output", help="projected CSV path")

    p = add("densify", help="reflect sparse binary data through the all-ones direction")
    p.add_argument("--input", help="sparse index-list file")
    p.add_argument(
        "--expand", action="store_true", help="write dense CSV instead of compact form"
    )
    p.add_argument("--output")

    p = add("windows", help="sample square pixel windows from a PGM image")
    p.add_argument("--input", help="PGM image (P2 or P5)")
    p.add_argument("--window", type=int, default=50, help="window side length")
    p.add_argument("--count", type=int, default=1000, help="windows to draw")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")

    p = add("distort", help="norm-ratio distortion sweep")
    _add_input_flags(p)
    p.add_argument("--methods", default="rs,rp,srp", help="comma-separated")
    p.add_argument("--k-grid", default="5:600:5", help="start:stop:step or list")
    p.add_argument("--eval-points", type=int, default=100)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--srp-scale", choices=["paper", "unbiased"], default="paper")
    p.add_argument(
        "--orthonormalize", action=argparse.BooleanOptionalAction, default=True
    )
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", help="aggregate CSV path")
    p.add_argument("--raw-output", help="optional per-pair ratio CSV")

    p = add("jllcheck", help="empirical norm-band coverage of subset draws")
    _add_input_flags(p)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--variant", choices=["basic", "serfling"], default="serfling")
    p.add_argument("--pairs", type=int, default=1000, help="pairs for estimating c")
    p.add_argument("--seed", type=int, default=0)

    p = add("dotcheck", help="empirical dot-product band coverage")
    _add_input_flags(p)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--variant", choices=["basic", "serfling"], default="serfling")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = add("bench", help="operator build/apply wall-clock benchmark")
    p.add_argument("--d", type=int, default=2500)
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--k-grid", default="100", help="start:stop:step or list")
    p.add_argument("--methods", default="rs,rp,srp")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument(
        "--data", choices=["dense", "sparse"], default="dense", help="synthetic data"
    )
    p.add_argument("--density", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")

    return parser, parsers


def _load_config_file(path):
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise ParseError(path, lineno, "expected 'key = value'")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(parser, subparser, argv):
    """Re-parse with config values as (type-converted) string defaults."""
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    cfg = _load_config_file(args.config)
    actions = {a.dest: a for a in subparser._actions}
    unknown = set(cfg) - set(actions)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, value in cfg.items():
        action = actions[key]
        if isinstance(
            action, (argparse._StoreTrueAction, argparse.BooleanOptionalAction)
        ):
            low = value.lower()
            if low in ("true", "yes", "1"):
                cfg[key] = True
            elif low in ("false", "no", "0"):
                cfg[key] = False
            else:
                raise ValueError(f"config key {key!r} expects a boolean, got {value!r}")
    subparser.set_defaults(**cfg)
    return parser.parse_args(argv)


def _check_required(args):
    for dest in _REQUIRED.get(args.command, ()):
        if getattr(args, dest, None) is None:
            flag = "--" + dest.replace("_", "-")
            raise ValueError(f"{args.command}: missing required flag {flag}")


def cmd_regularity(args):
    X = _load_input(args)
    basis = "sampled_differences" if args.basis == "differences" else "points"
    rng = child_rng(args.seed, "regularity") if basis == "sampled_differences" else None
    report = regularity_of_dataset(X, basis=basis, n_pairs=args.pairs, rng=rng)
    print(
        f"c={report.dataset_c!r} basis={args.basis} rows={X.n_rows} "
        f"defined={report.n_defined} skipped_zero={report.n_zero_rows} "
        f"pairs={report.n_pairs_sampled}"
    )
    if args.per_row:
        with open(args.per_row, "w", newline="\n") as fh:
            fh.write("row,c\n")
            for i, v in enumerate(report.per_row_c):
                fh.write(f"{i},{float(v)!r}\n")
    return 0


def cmd_bound(args):
    if args.variant == "basic":
        res = required_k_basic(args.c, args.epsilon, args.delta, args.n, d=args.d)
    else:
        if args.d is None:
            raise ValueError("--d is required for the serfling variant")
        res = required_k_serfling(args.c, args.epsilon, args.delta, args.n, args.d)
    print(f"k={res.k} feasible={res.feasible} raw_bound={res.raw_bound!r}")
    if args.invert_k is not None:
        inv = achievable_epsilon(
            args.c, args.invert_k, args.delta, args.n, d=args.d, variant=args.variant
        )
        print(f"epsilon_at_k={inv.epsilon!r} guaranteed={inv.guaranteed}")
    return 0


def cmd_project(args):
    X = _load_input(args)
    d = X.n_cols
    rng = child_rng(args.seed, "project", args.method, args.k)
    if args.method == "rs":
        op = rs_operator(d, args.k, rng)
    elif args.method == "rp":
        op = gaussian_rp_matrix(d, args.k, args.orthonormalize, rng)
    elif args.method == "srp":
        op = sparse_rp_matrix(d, args.k, rng, scale_mode=args.srp_scale)
    else:
        op = pca_operator(X, args.k)
    out = apply_operator(op, X, apply_scale=args.scale)
    write_dense_csv(out, args.output)
    print(f"projected {X.n_rows} rows: d={d} -> k={args.k} method={args.method}")
    return 0


def cmd_densify(args):
    X = load_sparse_binary(args.input)
    dens, (before, after) = densify_dataset(X)
    if args.expand:
        write_dense_csv(dens.to_dense(), args.output)
    else:
        write_compact(dens, args.output)
    print(f"c={before.dataset_c!r} c_prime={after.dataset_c!r} rows={X.n_rows}")
    return 0


def cmd_windows(args):
    img = load_pgm(args.input)
    rng = child_rng(args.seed, "windows")
    mat = sample_image_windows(img, args.window, args.count, rng)
    write_dense_csv(mat, args.output)
    print(f"sampled {args.count} windows of {args.window}x{args.window} "
          f"from {img.width}x{img.height} image: d={mat.n_cols}")
    return 0


def cmd_distort(args):
    X = _load_input(args)
    config = harness.ExperimentConfig(
        methods=_parse_methods(args.methods),
        k_grid=_parse_k_grid(args.k_grid),
        n_eval_points=args.eval_points,
        repeats=args.repeats,
        master_seed=args.seed,
        epsilon=args.epsilon,
        srp_scale=args.srp_scale,
        orthonormalize_rp=args.orthonormalize,
        collect_raw=args.raw_output is not None,
    )
    report = harness.distortion_sweep(X, config, n_threads=max(1, args.threads))
    report.to_csv(args.output)
    if args.raw_output:
        report.raw_to_csv(args.raw_output)
    print(f"wrote {len(report.rows)} rows to {args.output}")
    for method, k, rep, reason in report.skipped:
        print(f"skipped {method} k={k} repeat={rep}: {reason}")
    return 0


def cmd_jllcheck(args):
    X = _load_input(args)
    res = harness.jll_failure_rate(
        X,
        epsilon=args.epsilon,
        delta=args.delta,
        n_seeds=args.seeds,
        variant=args.variant,
        master_seed=args.seed,
        n_pairs_c=args.pairs,
    )
    if not res.feasible:
        print(f"infeasible: required k={res.k} exceeds d (c={res.c!r})")
        return 0
    verdict = "ok" if res.observed_rate <= res.bound else "VIOLATED"
    print(
        f"c={res.c!r} k={res.k} observed_rate={res.observed_rate!r} "
        f"bound={res.bound!r} seeds={res.n_seeds} {verdict}"
    )
    return 0


def cmd_dotcheck(args):
    X = _load_input(args)
    res = harness.dot_product_failure_rate(
        X,
        epsilon=args.epsilon,
        delta=args.delta,
        n_seeds=args.seeds,
        variant=args.variant,
        master_seed=args.seed,
        n_pairs_c=args.pairs,
    )
    if not res.feasible:
        print(f"infeasible: required k={res.k} exceeds d (c={res.c!r})")
        return 0
    verdict = "ok" if res.observed_rate <= res.bound else "VIOLATED"
    print(
        f"c={res.c!r} k={res.k} observed_rate={res.observed_rate!r} "
        f"bound={res.bound!r} seeds={res.n_seeds} {verdict}"
    )
    return 0


def cmd_bench(args):
    rows = harness.runtime_benchmark(
        d=args.d,
        k_grid=_parse_k_grid(args.k_grid),
        n_rows=args.rows,
        methods=_parse_methods(args.methods),
        repeats=args.repeats,
        data_kind=args.data,
        density=args.density,
        master_seed=args.seed,
    )
    harness.bench_to_csv(rows, args.output)
    for r in rows:
        print(f"{r.method} k={r.k} build={r.build_ns}ns apply={r.apply_ns}ns")
    return 0


_HANDLERS = {
    "regularity": cmd_regularity,
    "bound": cmd_bound,
    "project": cmd_project,
    "densify": cmd_densify,
    "windows": cmd_windows,
    "distort": cmd_distort,
    "jllcheck": cmd_jllcheck,
    "dotcheck": cmd_dotcheck,
    "bench": cmd_bench,
}


def run(argv) -> int:
    parser, parsers = build_parser()
    try:
        ns, _ = parser.parse_known_args(argv)
        args = _apply_config(parser, parsers[ns.command], argv)
        _check_required(args)
        return _HANDLERS[args.command](args)
    except SystemExit as exc:  # argparse error or --help
        code = exc.code if exc.code is not None else 0
        return int(code)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
