"""Command-line entry point: ``netexpand {stats,signature,search-table,greedy-vs-xs,fetch}``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from ..expansion import DEFAULT_FRACTIONS
from ..graph import compute_stats
from ..search import STRATEGIES
from .datasets import REGISTRY, DatasetError, fetch_dataset
from .experiments import (
    DEFAULT_SEED,
    DEFAULT_TARGETS,
    DEFAULT_TRIALS,
    greedy_vs_xs,
    resolve_network,
    search_table,
    signature_for,
    stats_csv,
    write_sidecar,
)


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--network", action="append", default=[],
                   help="registered dataset name or file:<edge list path>; repeatable")
    p.add_argument("--generator", action="append", default=[],
                   help="inline generator, e.g. er:n=10000,p=0.0005 or ba:n=10000,m=3; repeatable")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p.add_argument("--out", help="output CSV path (stdout if omitted)")
    p.add_argument("--cache-dir", help="dataset cache directory (default: $NETEXPAND_CACHE or ~/.cache/netexpand)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netexpand", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="network statistics table")
    _common(p)
    p.add_argument("--path-samples", type=int, default=100, help="BFS sources for path length")

    p = sub.add_parser("signature", help="expansion signature of one network")
    _common(p)
    p.add_argument("--fractions", type=_floats, default=list(DEFAULT_FRACTIONS))

    p = sub.add_parser("search-table", help="steps to reach coverage targets per strategy")
    _common(p)
    p.add_argument("--strategies", type=lambda s: s.split(","), default=list(STRATEGIES))
    p.add_argument("--targets", type=_floats, default=list(DEFAULT_TARGETS))
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("greedy-vs-xs", help="greedy sample coverage against mean XS coverage")
    _common(p)
    p.add_argument("--steps", type=int, default=1000)

    p = sub.add_parser("fetch", help="download registered datasets into the cache")
    _common(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    networks = list(args.network) + list(args.generator)
    failures: dict[str, str] = {}

    if args.command == "fetch":
        for name in args.network or sorted(REGISTRY):
            try:
                path = fetch_dataset(REGISTRY[name], args.cache_dir)
                print(f"{name}\t{path}")
            except (KeyError, DatasetError) as exc:
                failures[name] = str(exc)

    elif args.command == "search-table":
        report = search_table(networks, args.strategies, args.targets, args.trials, args.seed,
                              args.cache_dir, args.workers)
        failures.update(report.failures)
        _emit(report.to_csv(), args.out)
        if args.out:
            write_sidecar(args.out, command="search-table", failures=report.failures, **report.metadata)

    else:
        if args.command in ("signature", "greedy-vs-xs") and len(networks) != 1:
            print(f"{args.command} takes exactly one --network or --generator", file=sys.stderr)
            return 2
        loaded = []
        for net in networks:
            try:
                loaded.append((net, resolve_network(net, args.seed, args.cache_dir)))
            except Exception as exc:  # noqa: BLE001
                failures[net] = f"{type(exc).__name__}: {exc}"
        if args.command == "stats":
            rows = [(net, compute_stats(g, args.path_samples, args.seed)) for net, g in loaded]
            _emit(stats_csv(rows), args.out)
        elif args.command == "signature" and loaded:
            net, g = loaded[0]
            sig = signature_for(g, args.fractions)
            _emit(sig.to_csv(), args.out)
            threshold = sig.saturation_fraction()
            msg = f"{threshold:.6f}" if threshold is not None else "not reached"
            print(f"{net}: smallest fraction with max quality 1: {msg}", file=sys.stderr)
        elif args.command == "greedy-vs-xs" and loaded:
            net, g = loaded[0]
            _emit(greedy_vs_xs(g, net, args.steps, args.trials, args.seed).to_csv(), args.out)
        if args.out:
            write_sidecar(args.out, command=args.command, networks=networks, seed=args.seed,
                          trials=args.trials, failures=failures)

    for net, reason in failures.items():
        print(f"FAILED {net}: {reason}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
