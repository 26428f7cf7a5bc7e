"""Command-line front end: EP table generation, sweeps, complexity reports."""

from __future__ import annotations

import argparse
import math
import sys

from . import harness, patterns
from .crcpolar import load_code_config
from .decoder import DecoderConfig


def _parse_snr(text: str):
    """'start:step:stop' (inclusive) or a single dB value; 'inf' allowed."""
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected 'start:step:stop' or a single value")
    start, step, stop = (float(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("step must be positive")
    points = []
    v = start
    while v <= stop + 1e-9:
        points.append(round(v, 9))
        v += step
    return tuple(points)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="peposd",
                                description="CRC-polar error-pattern OSD workbench")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ep-gen", help="generate and store an error-pattern table")
    g.add_argument("--wi-max", type=int, required=True)
    g.add_argument("--wh-max", type=int, required=True)
    g.add_argument("--order", choices=[patterns.ORDER_IWHW, patterns.ORDER_PW],
                   default=patterns.ORDER_IWHW)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--beta", type=float, default=0.0)
    g.add_argument("--out", required=True)

    s = sub.add_parser("simulate", help="run a Monte Carlo BLER sweep")
    s.add_argument("--code", required=True, help="code config file")
    s.add_argument("--decoder", choices=["peposd", "cascl"], required=True)
    s.add_argument("--ep-store", help="EP table file (peposd)")
    s.add_argument("--delta", type=int, default=1)
    s.add_argument("--wi-max", type=int, help="generate table when no --ep-store")
    s.add_argument("--wh-max", type=int)
    s.add_argument("--order", choices=[patterns.ORDER_IWHW, patterns.ORDER_PW],
                   default=patterns.ORDER_IWHW)
    s.add_argument("--alpha", type=float, default=0.0)
    s.add_argument("--beta", type=float, default=0.0)
    s.add_argument("--no-empty-ep", action="store_true",
                   help="skip the order-0 raw hard-decision test")
    s.add_argument("--list-size", type=int, default=32)
    s.add_argument("--snr", type=_parse_snr, required=True,
                   help="Eb/N0 sweep, 'start:step:stop' in dB")
    s.add_argument("--frames", type=int, default=10000)
    s.add_argument("--min-errors", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True, help="CSV destination")

    r = sub.add_parser("report-complexity", help="operation-count table")
    r.add_argument("--codes", nargs="+", required=True, help="code config files")
    r.add_argument("--list-size", type=int, default=32)

    return p


def cmd_ep_gen(args) -> int:
    table = patterns.build_table(args.wi_max, args.wh_max, args.order,
                                 args.alpha, args.beta)
    patterns.write_store(table, args.out)
    print(f"wrote {len(table.patterns)} error patterns to {args.out}")
    return 0


def cmd_simulate(args) -> int:
    spec = load_code_config(args.code)
    table = None
    dec_cfg = None
    if args.decoder == "peposd":
        if args.ep_store:
            table = patterns.read_store(args.ep_store)
        elif args.wi_max and args.wh_max:
            table = patterns.build_table(args.wi_max, args.wh_max, args.order,
                                         args.alpha, args.beta)
        else:
            raise ValueError("peposd needs --ep-store or --wi-max/--wh-max")
        dec_cfg = DecoderConfig(delta=args.delta,
                                test_empty_ep=not args.no_empty_ep)
    cfg = harness.ExperimentConfig(
        code=spec, ebn0_points=tuple(args.snr), decoder=args.decoder,
        table=table, decoder_cfg=dec_cfg, list_size=args.list_size,
        frames=args.frames, min_errors=args.min_errors, seed=args.seed,
        workers=args.workers,
    )
    stats = harness.run_sweep(cfg)
    harness.emit_csv(stats, args.out)
    for s in stats:
        print(f"Eb/N0={s.ebn0_db:g} dB: BLER={s.bler:.3e} "
              f"({s.block_errors}/{s.frames_run}), avg queries={s.avg_queries:.2f}")
    return 0


def cmd_report_complexity(args) -> int:
    specs = [load_code_config(path) for path in args.codes]
    rows = harness.complexity_report(specs, list_size=args.list_size)
    width = max(len(r["code"]) for r in rows)
    print(f"{'code':<{width}}  {'GE ops':>10}  {'CA-SCL ops':>10}  {'CA-OSD (ref)':>12}")
    for r in rows:
        osd = r["ca_osd_ref"] if r["ca_osd_ref"] is not None else "-"
        print(f"{r['code']:<{width}}  {r['ge_ops']:>10}  {r['cascl_ops']:>10}  {osd:>12}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "ep-gen":
            return cmd_ep_gen(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "report-complexity":
            return cmd_report_complexity(args)
        raise AssertionError(args.command)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
