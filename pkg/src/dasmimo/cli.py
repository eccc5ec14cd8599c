"""Command-line entry point: ``dasmimo figure|sweep|validate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import FIGURES, SWEEP_OPERATIONS, ExperimentConfig, run_figure, run_sweep, \
    validate_invariants


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    p.add_argument("--alpha", type=float, nargs="+", help="path-loss factor(s)")
    p.add_argument("--snr-db", type=float, nargs="+", dest="snr_db", help="P_t/N0 in dB")
    p.add_argument("--users", type=int, nargs="+", dest="K", metavar="K", help="users per cell")
    p.add_argument("--clusters", type=int, nargs="+", dest="L", metavar="L",
                   help="antenna clusters per cell")
    p.add_argument("--user-antennas", type=int, nargs="+", dest="N", metavar="N",
                   help="antennas per user (and per cluster)")
    p.add_argument("--layout", nargs="+", choices=["ca", "da", "smallcell"])
    p.add_argument("--trials-pos", type=int, dest="positions", help="user position draws")
    p.add_argument("--trials-layout", type=int, dest="layouts", help="cluster layout draws")
    p.add_argument("--trials-chan", type=int, dest="channels", help="small-scale fading draws")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--full", action="store_true", default=None,
                   help="allow full-scale runs beyond M = 256")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dasmimo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    fig = sub.add_parser("figure", help="reproduce one figure as CSV")
    fig.add_argument("figure_id", choices=FIGURES)
    _add_common(fig)
    sw = sub.add_parser("sweep", help="evaluate one operation over a parameter grid")
    sw.add_argument("--op", dest="operation", choices=sorted(SWEEP_OPERATIONS))
    sw.add_argument("--shard", type=int, nargs=2, metavar=("INDEX", "COUNT"))
    _add_common(sw)
    val = sub.add_parser("validate", help="run the invariant checks")
    val.add_argument("--seed", type=int, default=0)
    return parser


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    keys = ("alpha", "snr_db", "K", "L", "N", "layout", "positions", "layouts", "channels",
            "seed", "out", "workers", "full", "operation")
    return cfg.merged(**{k: getattr(args, k, None) for k in keys})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            results = validate_invariants(args.seed)
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
            return 0 if all(ok for _, ok, _ in results) else 1
        cfg = _config(args)
        if args.command == "figure":
            table = run_figure(args.figure_id, cfg)
        else:
            if cfg.operation is None:
                raise ValueError("sweep needs --op or an 'operation' entry in the config")
            table = run_sweep(cfg, tuple(args.shard) if args.shard else None)
            if args.shard:
                table.name = f"{table.name}.shard{args.shard[0]}of{args.shard[1]}"
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    paths = table.write(cfg.out)
    print(paths["csv"])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
