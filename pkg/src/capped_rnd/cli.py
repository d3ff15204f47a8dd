"""capped-rnd command line interface."""

from __future__ import annotations

import argparse
import json
import sys

from . import evaluation, harness
from .topology import load_topology_file
from .traffic import SweepConfig, load_demand_series


def _cmd_sweep(args) -> int:
    topo = load_topology_file(args.topology)
    cfg = SweepConfig(s=args.s, k=args.k, seed=args.seed, sample_count=args.samples)
    records = harness.run_sweep(topo, cfg, gravity_exponent=args.gravity_exponent)
    harness.write_records(records, args.out)
    harness.write_manifest(
        args.out,
        args.topology,
        "sweep",
        cfg,
        extra={
            "gravity_exponent": args.gravity_exponent,
            "distance_metric": topo.coordinate_system,
        },
    )
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_timeseries(args) -> int:
    topo = load_topology_file(args.topology)
    with open(args.series, encoding="utf-8") as fh:
        series = load_demand_series(fh.read(), nodes=list(topo.node_ids))
    horizons = [int(h) for h in args.horizons.split(",")]
    records = harness.run_timeseries(topo, series, horizons)
    harness.write_records(records, args.out)
    harness.write_manifest(
        args.out,
        args.topology,
        "timeseries",
        None,
        extra={
            "series_path": args.series,
            "horizons": horizons,
            "distance_metric": topo.coordinate_system,
        },
    )
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_fixture(args) -> int:
    if args.kind != "theorem2":
        print(f"unknown fixture {args.kind!r}", file=sys.stderr)
        return 2
    topo, model = evaluation.theorem2_fixture(args.n)
    doc = {
        "coordinate_system": topo.coordinate_system,
        "nodes": [{"id": i} for i in topo.node_ids],
        "edges": [
            {"a": a, "b": b, "cost": topo.edge_costs[frozenset((a, b))]}
            for a, b in sorted(tuple(sorted(e)) for e in topo.edge_costs)
        ],
        "marginals": model.marginals,
        "peaks": {f"{i}|{j}": u for (i, j), u in sorted(model.peaks.items())},
    }
    print(json.dumps(doc, indent=2))
    return 0


def _cmd_summarize(args) -> int:
    records = harness.read_records(args.results)
    print(json.dumps(harness.summarize(records), indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="capped-rnd",
        description="Robust network design costs for capped hose traffic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="gravity-model sigma sweep")
    p.add_argument("--topology", required=True)
    p.add_argument("--s", type=int, required=True, help="grid steps per interval")
    p.add_argument("--k", type=int, required=True, help="short sigma vector length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="sampled sigma count")
    p.add_argument("--gravity-exponent", type=int, choices=(1, 2), default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("timeseries", help="evaluate time-series prefixes")
    p.add_argument("--topology", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--horizons", required=True, help="comma-separated prefix lengths")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_timeseries)

    p = sub.add_parser("fixture", help="emit an analytic fixture as JSON")
    p.add_argument("kind", choices=["theorem2"])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_fixture)

    p = sub.add_parser("summarize", help="summary statistics for a results CSV")
    p.add_argument("results")
    p.set_defaults(func=_cmd_summarize)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
