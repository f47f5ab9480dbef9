"""``vqhull`` command line: gen, hull, bench, verify, baseline."""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .bench import DEFAULT_REPS, append_csv, run_bench, stream_scale_baseline, write_csv
from .config import HullConfig, config_from_env, env_workers
from .datasets import KINDS, DatasetSpec
from .errors import PointFormatError
from .hull import HullPolygon, convex_hull
from .pointio import FORMATS, read_points, write_points
from .verify import verify_hull

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_dataset(p):
    p.add_argument("--dataset", choices=KINDS, help="generate this distribution")
    p.add_argument("--n", type=int, default=1_000_000, help="number of points (default 10^6)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="inp", metavar="PATH", help="read points from a file instead")


def _add_hull_knobs(p):
    p.add_argument("--workers", type=int, help="worker threads (env VQHULL_WORKERS, default 1)")
    p.add_argument("--block-size", type=int, help="block-cyclic block size in points (env VQHULL_BLOCK)")
    p.add_argument("--lanes", type=int, choices=(2, 4, 8), help="lane width (env VQHULL_LANES)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vqhull", description="Planar convex hulls and hull benchmarks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a synthetic point set")
    g.add_argument("--dataset", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=FORMATS, help="default: binary for .bin, text otherwise")
    g.add_argument("--out", required=True)

    h = sub.add_parser("hull", help="compute a hull")
    _add_dataset(h)
    _add_hull_knobs(h)
    h.add_argument("--format", choices=FORMATS, default="text", help="output format")
    h.add_argument("--out", help="write hull vertices here (default: stdout summary only)")

    b = sub.add_parser("bench", help="time repeated hull runs")
    _add_dataset(b)
    _add_hull_knobs(b)
    b.add_argument("--reps", type=int, default=DEFAULT_REPS)
    b.add_argument("--csv", help="append result rows to this CSV file ('-' for stdout)")
    b.add_argument("--json", action="store_true", help="also print one JSON line per report")
    b.add_argument("--baseline", action="store_true", help="also measure the Scale baseline")

    v = sub.add_parser("verify", help="check a hull against its points")
    v.add_argument("--in", dest="inp", metavar="PATH", required=True)
    v.add_argument("--hull", help="hull file; recomputed when omitted")
    _add_hull_knobs(v)

    s = sub.add_parser("baseline", help="in-place Scale bandwidth baseline")
    s.add_argument("--buffer-mb", type=float, help="buffer size (default 4x last-level cache)")
    s.add_argument("--reps", type=int, default=DEFAULT_REPS)
    return parser


def _config(args) -> tuple[int, HullConfig]:
    cfg = config_from_env(HullConfig())
    cfg = cfg.with_overrides(lanes=args.lanes, block_size=args.block_size)
    workers = args.workers if args.workers is not None else (env_workers() or 1)
    if workers < 1:
        raise ValueError("--workers must be >= 1")
    return workers, cfg


def _load(args):
    if args.inp:
        return read_points(args.inp), None
    if not args.dataset:
        raise ValueError("give --dataset or --in")
    spec = DatasetSpec(args.dataset, args.n, args.seed)
    return spec.generate(), spec


def _cmd_gen(args) -> int:
    fmt = args.format or ("binary" if args.out.endswith(".bin") else "text")
    P = DatasetSpec(args.dataset, args.n, args.seed).generate()
    write_points(args.out, P, fmt)
    print(f"wrote {P.n} {args.dataset} points to {args.out} ({fmt})")
    return EXIT_OK


def _cmd_hull(args) -> int:
    workers, cfg = _config(args)
    P, _ = _load(args)
    hull = convex_hull(P, workers, cfg, in_place=True)
    if args.out:
        write_points(args.out, hull.to_pointset(), args.format)
    print(f"{hull.h} hull vertices from {P.n} points")
    return EXIT_OK


def _cmd_bench(args) -> int:
    workers, cfg = _config(args)
    if args.inp:
        report = run_bench(None, workers, cfg.lanes, args.reps, path=args.inp, config=cfg)
    elif args.dataset:
        report = run_bench(DatasetSpec(args.dataset, args.n, args.seed), workers, cfg.lanes,
                           args.reps, config=cfg)
    else:
        raise ValueError("give --dataset or --in")
    print(report.table())
    if args.baseline:
        base = stream_scale_baseline()
        print(f"scale       {base:.2f} GB/s  ({100 * report.bandwidth / base:.1f}% reached)")
    if args.json:
        print(report.to_json())
    if args.csv == "-":
        write_csv([report], sys.stdout)
    elif args.csv:
        append_csv(args.csv, [report])
    return EXIT_OK


def _cmd_verify(args) -> int:
    P = read_points(args.inp)
    if args.hull:
        H = read_points(args.hull)
        hull = HullPolygon(H.xs, H.ys)
    else:
        workers, cfg = _config(args)
        hull = convex_hull(P, workers, cfg)
    report = verify_hull(P, hull)
    print(report)
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_baseline(args) -> int:
    size = None if args.buffer_mb is None else int(args.buffer_mb * (1 << 20))
    print(f"scale {stream_scale_baseline(size, args.reps):.2f} GB/s")
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen, "hull": _cmd_hull, "bench": _cmd_bench,
    "verify": _cmd_verify, "baseline": _cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (OSError, PointFormatError, ValueError) as exc:
        print(f"vqhull {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
