"""Command-line interface.

Subcommands: count, edges, stats, parallel, em, approx, gen.  Reports are
JSON by default (TSV with --format tsv) on stdout or --output.  Exit
codes: 0 success, 1 I/O error, 2 parse/config/usage error, 3 overflow.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import approx as approx_mod
from . import generate
from .edges import edge_counts_tsv, per_edge_counts
from .errors import ConfigError, CountOverflowError, ParseError
from .exact import count_butterflies, count_caterpillars, prepare_vpp
from .external import EmConfig, em_count
from .graph import load_edge_list
from .parallel import ScheduleConfig, count_parallel

SIZE_SUFFIXES = {"kib": 1024, "mib": 1024 ** 2, "gib": 1024 ** 3}


def parse_size(text: str) -> int:
    """Accept plain bytes or KiB/MiB/GiB suffixes, e.g. '64KiB', '1MiB'."""
    lowered = text.strip().lower()
    try:
        for suffix, factor in SIZE_SUFFIXES.items():
            if lowered.endswith(suffix):
                return int(float(lowered[: -len(suffix)]) * factor)
        return int(lowered)
    except ValueError:
        raise ConfigError(f"unreadable size {text!r}; use bytes or a "
                          f"KiB/MiB/GiB suffix") from None


def _report_lines(data: dict) -> str:
    return "".join(f"{key}\t{value}\n" for key, value in data.items())


def _emit(args, data: dict, tsv_text: str | None = None) -> None:
    if args.format == "tsv":
        text = tsv_text if tsv_text is not None else _report_lines(data)
    else:
        text = json.dumps(data, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _count_payload(report, algo: str) -> dict:
    return {
        "algorithm": algo,
        "butterflies": report.butterflies,
        "wedges_processed": report.wedges_processed,
        "start_accesses": report.start_accesses,
        "middle_accesses": report.middle_accesses,
        "end_accesses": report.end_accesses,
        "elapsed_seconds": report.elapsed,
    }


def _load(args):
    g = load_edge_list(args.input)
    if g.duplicates_dropped:
        print(f"warning: dropped {g.duplicates_dropped} duplicate edges",
              file=sys.stderr)
    return g


def cmd_count(args) -> int:
    g = _load(args)
    report = count_butterflies(g, args.algo)
    _emit(args, _count_payload(report, args.algo))
    return 0


def cmd_edges(args) -> int:
    g = _load(args)
    ec = per_edge_counts(g)
    labels = g.external_labels
    rows = [[labels[u], labels[v], ec.per_edge[i]]
            for i, (u, v) in enumerate(g.edges)]
    data = {"butterflies": ec.butterflies, "edges": rows}
    _emit(args, data, tsv_text=edge_counts_tsv(g, ec))
    return 0


def cmd_stats(args) -> int:
    g = _load(args)
    report = count_butterflies(g, "vpp")
    cate = count_caterpillars(g)
    cc = None if cate == 0 else 4 * report.butterflies / cate
    data = {
        "butterflies": report.butterflies,
        "caterpillars": cate,
        "clustering_coefficient": cc,
    }
    _emit(args, data)
    return 0


def cmd_parallel(args) -> int:
    g = _load(args)
    prepared, p2, _ = prepare_vpp(g)
    cfg = ScheduleConfig(mode=args.schedule, strategy=args.strategy,
                         threads=args.threads, seed=args.seed)
    report, thread_reports = count_parallel(prepared, p2, cfg)
    data = _count_payload(report, "vpp")
    data["mode"] = cfg.mode
    data["strategy"] = cfg.strategy
    data["threads"] = [
        {"thread": tr.thread, "butterflies": tr.butterflies,
         "wedges_processed": tr.wedges_processed,
         "vertices_handled": tr.vertices_handled}
        for tr in thread_reports
    ]
    _emit(args, data)
    return 0


def cmd_em(args) -> int:
    cfg = EmConfig(memory_budget=parse_size(args.memory_budget),
                   block_size=parse_size(args.block_size),
                   scratch_dir=args.scratch_dir,
                   keep_scratch=args.keep_scratch)
    report, io_stats = em_count(args.input, cfg)
    data = _count_payload(report, "em")
    data["io"] = {
        "blocks_read": io_stats.blocks_read,
        "blocks_written": io_stats.blocks_written,
        "pairs_emitted": io_stats.pairs_emitted,
        "merge_passes": io_stats.merge_passes,
    }
    _emit(args, data)
    return 0


def cmd_approx(args) -> int:
    g = _load(args)
    _, summary = approx_mod.run_trials(g, args.p, args.trials, args.seed)
    _emit(args, summary.to_dict())
    return 0


def cmd_gen(args) -> int:
    b = args.b if args.b is not None else args.a
    if args.kind == "hub":
        pairs = generate.hub_pairs(args.a, b)
        header = f"hub a={args.a} b={b}"
    elif args.kind == "hubpath":
        pairs = generate.hub_path_pairs(args.a)
        header = f"hubpath a={args.a}"
    elif args.kind == "complete":
        pairs = generate.complete_pairs(args.a, b)
        header = f"complete {args.a}x{b}"
    else:
        if args.edges is not None:
            pairs = generate.random_pairs_m(args.a, b, args.edges, args.seed)
            header = f"random {args.a}x{b} m={args.edges} seed={args.seed}"
        else:
            pairs = generate.random_pairs(args.a, b, args.p, args.seed)
            header = f"random {args.a}x{b} p={args.p} seed={args.seed}"
    text = generate.pairs_to_text(pairs, header)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicount",
        description="Butterfly counting for bipartite edge lists.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--output", default=None, help="write the report here")

    p = sub.add_parser("count", help="exact global count")
    p.add_argument("input")
    p.add_argument("--algo", choices=("ibs", "vp", "vpp"), default="vpp",
                   help="ibs: layer-selected baseline; vp: vertex-priority; "
                        "vpp: vertex-priority with projection (default)")
    add_io(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("edges", help="exact per-edge counts")
    p.add_argument("input")
    add_io(p)
    p.set_defaults(func=cmd_edges)

    p = sub.add_parser("stats", help="butterflies, caterpillars, clustering coefficient")
    p.add_argument("input")
    add_io(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("parallel", help="multi-threaded exact count")
    p.add_argument("input")
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--schedule", choices=("dynamic", "static"), default="dynamic")
    p.add_argument("--strategy", choices=("priority", "random", "heuristic"),
                   default="priority")
    p.add_argument("--seed", type=int, default=0)
    add_io(p)
    p.set_defaults(func=cmd_parallel)

    p = sub.add_parser("em", help="out-of-core exact count")
    p.add_argument("input")
    p.add_argument("--memory-budget", default="64MiB")
    p.add_argument("--block-size", default="64KiB")
    p.add_argument("--scratch-dir", default=None)
    p.add_argument("--keep-scratch", action="store_true")
    add_io(p)
    p.set_defaults(func=cmd_em)

    p = sub.add_parser("approx", help="sampled estimate")
    p.add_argument("input")
    p.add_argument("--p", type=float, default=0.1, help="edge keep probability")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    add_io(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("gen", help="write a synthetic graph")
    p.add_argument("kind", choices=("hub", "hubpath", "complete", "random"))
    p.add_argument("--a", type=int, required=True, help="primary size knob")
    p.add_argument("--b", type=int, default=None, help="secondary size knob")
    p.add_argument("--p", type=float, default=0.1, help="random edge probability")
    p.add_argument("--edges", type=int, default=None,
                   help="random: exact edge count instead of probability")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CountOverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # Bad parameter values (probabilities, sizes) from deeper layers.
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
