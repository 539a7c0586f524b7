"""Command line front end: run scenarios, batch the suite, serve live.

Subcommands:
    run <scenario.ini> [--out DIR] [--case N] [--seed N]
    suite [--out DIR]
    serve [--port P] [--scenario FILE]
    metrics <ticks.csv> [--out FILE]
"""

import argparse
import asyncio
import json
import sys

import numpy as np

from .scenarios import bundled_suite, load_scenario
from .sim import (TICK_COLUMNS, SimFault, SimLog, run_scenario,
                  write_metrics_csv)


def _cmd_run(args):
    scenario = load_scenario(args.scenario)
    try:
        log, summary = run_scenario(scenario, out_dir=args.out,
                                    case=args.case, seed=args.seed)
    except SimFault as fault:
        print(json.dumps({"fault": {"tick": fault.tick,
                                    "reason": fault.reason}}, indent=1))
        return 2
    print(json.dumps(summary, indent=1))
    return 0


def _fmt(value, spec=".3f"):
    return "None" if value is None else format(value, spec)


def _cmd_suite(args):
    failed = 0
    for scenario in bundled_suite():
        try:
            log, s = run_scenario(scenario, out_dir=args.out)
        except SimFault as fault:
            print(f"{scenario.name:24s} FAULT tick {fault.tick}: "
                  f"{fault.reason}")
            failed += 1
            continue
        print(f"{scenario.name:24s} eta={_fmt(s['mean_efficiency'])} "
              f"max_eps=({_fmt(s['max_eps_x'])},{_fmt(s['max_eps_y'])}) "
              f"settle={_fmt(s['settle_time'], '.2f')} "
              f"strikes={s['strikes']}")
    return 1 if failed else 0


def _cmd_serve(args):
    from .server import LiveServer

    scenario = load_scenario(args.scenario) if args.scenario else None
    server = LiveServer(scenario=scenario)

    async def _main():
        port = await server.start(args.port)
        print(f"listening on ws://127.0.0.1:{port}", flush=True)
        try:
            await server.wait_closed()
        except asyncio.CancelledError:
            pass

    try:
        asyncio.run(_main())
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_metrics(args):
    with open(args.log, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
    if header.split(",") != TICK_COLUMNS:
        print("not a tick log: unexpected columns", file=sys.stderr)
        return 2
    data = np.loadtxt(args.log, delimiter=",", skiprows=1, ndmin=2)
    log = SimLog(data)
    out = args.out
    if out is None:
        base = args.log
        out = (base[:-len("_ticks.csv")] + "_metrics.csv"
               if base.endswith("_ticks.csv") else base + ".metrics.csv")
    rows = write_metrics_csv(out, log)
    if rows == 0:
        print("record shorter than one efficiency window; nothing written",
              file=sys.stderr)
        return 1
    print(f"wrote {rows} rows to {out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cotransport",
        description="planar co-transportation control stack")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario file")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default=None, help="artifact directory")
    p_run.add_argument("--case", type=int, choices=(1, 2, 3, 4),
                       default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.set_defaults(func=_cmd_run)

    p_suite = sub.add_parser("suite", help="run every bundled scenario")
    p_suite.add_argument("--out", default=None)
    p_suite.set_defaults(func=_cmd_suite)

    p_serve = sub.add_parser("serve", help="live websocket service")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--scenario", default=None,
                         help="scenario file (default: hold in place)")
    p_serve.set_defaults(func=_cmd_serve)

    p_metrics = sub.add_parser("metrics",
                               help="recompute metrics from a tick log")
    p_metrics.add_argument("log")
    p_metrics.add_argument("--out", default=None)
    p_metrics.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
