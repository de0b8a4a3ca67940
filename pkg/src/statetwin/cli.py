"""Command-line entry point.

    statetwin recipes
    statetwin snapshot --provider mock --pool-id eth_dai_v2
    statetwin analyze --primitive analyze_position --pool-id eth_dai_v2 \\
        --arg entry_x_amt=1000 --arg entry_y_amt=100000
    statetwin sweep --pool-id usdc_weth_v3 --scenarios "-0.3,-0.2,-0.1,0,0.1,0.2,0.3"
    statetwin fidelity --swaps 100 --seed 42
    statetwin serve --provider mock

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from decimal import Decimal, InvalidOperation

from statetwin.ensemble import aggregate, fork_and_evaluate
from statetwin.errors import StateTwinError, UnsupportedInput
from statetwin.fidelity import run_fidelity
from statetwin.primitives import PRIMITIVES
from statetwin.primitives import get as get_primitive
from statetwin.primitives.results import jsonable
from statetwin.providers.csv import CSVProvider, write_rows
from statetwin.providers.mock import RECIPES, MockProvider
from statetwin.twin import build, snapshot_to_dict, snapshot_to_json

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def make_provider(args):
    if args.provider == "mock":
        return MockProvider()
    if args.provider == "csv":
        if not args.csv_path:
            raise UsageError("--csv-path is required with --provider csv")
        return CSVProvider(args.csv_path)
    from statetwin.providers.live import LiveProvider

    return LiveProvider(args.rpc_url)


class UsageError(Exception):
    pass


def _snapshot_kwargs(args) -> dict:
    if args.provider != "live":
        return {}
    block = args.block
    return {"block": int(block) if str(block).isdigit() else block}


def _parse_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        return text


def _parse_args_list(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--arg expects key=value, got {pair!r}")
        out[key.strip()] = _parse_value(value.strip())
    return out


def _parse_grid(text: str) -> list:
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [float(t) for t in items]
    except ValueError:
        raise UsageError(f"scenario grid must be comma-separated decimals, got {text!r}") from None


# -- output ------------------------------------------------------------------


def _emit_record(data: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out)
        writer.writerow(list(data))
        writer.writerow([_cell(v) for v in data.values()])
    else:
        width = max((len(k) for k in data), default=0)
        for key, value in data.items():
            out.write(f"{key:<{width}}  {_cell(value)}\n")


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return "" if value is None else str(value)


# -- commands ----------------------------------------------------------------


def cmd_recipes(args, out) -> int:
    rows = [snapshot_to_dict(snap) for snap in RECIPES.values()]
    if args.format == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return EXIT_OK
    for name, snap in RECIPES.items():
        extra = f"A={snap.amplification:g}" if snap.protocol == "stableswap" else f"fee={snap.fee:g}"
        out.write(f"{name:<18} {snap.protocol:<11} {snap.token0_name}/{snap.token1_name}  {extra}\n")
    return EXIT_OK


def cmd_snapshot(args, out) -> int:
    snap = make_provider(args).snapshot(args.pool_id, **_snapshot_kwargs(args))
    if args.format == "json":
        out.write(snapshot_to_json(snap, indent=2) + "\n")
    elif args.format == "csv":
        write_rows([snap], out)
    else:
        _emit_record(snapshot_to_dict(snap), "table", out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    provider = make_provider(args)
    primitive = get_primitive(args.primitive)
    kwargs = _parse_args_list(args.arg)
    twin = build(provider.snapshot(args.pool_id, **_snapshot_kwargs(args)))
    if args.primitive == "aggregate_portfolio":
        record = primitive.apply([(twin, kwargs.get("lp_amount", 1.0), kwargs.get("conversion_rate", 1.0))])
    else:
        try:
            record = primitive.apply(twin, **kwargs)
        except TypeError as exc:
            raise UsageError(f"bad arguments for {args.primitive}: {exc}") from None
    _emit_record(record.to_dict(), args.format, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    grid = _parse_grid(args.scenarios)
    if not grid:
        raise UnsupportedInput("scenario grid is empty")
    fixed = _parse_args_list(args.arg)
    twin = build(make_provider(args).snapshot(args.pool_id, **_snapshot_kwargs(args)))
    sweep = fork_and_evaluate(
        twin, grid, args.primitive, arg_name=args.arg_name,
        workers=args.workers, parallel=not args.serial, **fixed,
    )
    stats = aggregate(sweep, args.field)
    if args.format == "json":
        out.write(json.dumps(sweep.to_dict(args.field), indent=2) + "\n")
        return EXIT_OK
    rows = []
    for r in sweep.results:
        row = {args.arg_name: r.scenario}
        row.update(r.result.to_dict() if r.ok else {})
        row["error"] = r.error or ""
        rows.append(row)
    columns = list(dict.fromkeys(k for row in rows for k in row))
    if args.format == "csv":
        writer = csv.DictWriter(out, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        out.write("\n")
        writer = csv.writer(out)
        for key, value in stats.items():
            writer.writerow([key, value])
        writer.writerow(["wall_clock_ms", sweep.wall_clock_ms])
    else:
        out.write("  ".join(columns) + "\n")
        for row in rows:
            out.write("  ".join(_cell(row.get(k)) for k in columns) + "\n")
        out.write("\n")
        _emit_record({**stats, "wall_clock_ms": sweep.wall_clock_ms}, "table", out)
    return EXIT_OK


def cmd_fidelity(args, out) -> int:
    report = run_fidelity(
        swaps=args.swaps, seed=args.seed, reserve_bound=args.reserve_bound, trajectories=args.trajectories
    )
    _emit_record(jsonable(report.to_dict()), args.format, out)
    return EXIT_OK


def cmd_serve(args, out) -> int:
    from statetwin.tools.server import ToolServer

    ToolServer(make_provider(args)).serve(sys.stdin, out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _int_or_sci(text: str) -> int:
    """Positive integer, also accepting exact scientific notation such as 1e18."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if not value.is_finite() or value != value.to_integral_value() or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    providers = argparse.ArgumentParser(add_help=False)
    providers.add_argument("--provider", choices=["mock", "csv", "live"], default="mock")
    providers.add_argument("--csv-path")
    providers.add_argument("--rpc-url", help="defaults to $STATETWIN_RPC_URL")
    providers.add_argument("--block", default="latest", help="block number or tag (live only)")

    def fmt(p, default="table"):
        p.add_argument("--format", choices=["json", "csv", "table"], default=default)

    parser = argparse.ArgumentParser(prog="statetwin", description="Forkable in-memory AMM pool twins.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recipes", help="list the built-in mock recipes")
    fmt(p)
    p.set_defaults(func=cmd_recipes)

    p = sub.add_parser("snapshot", parents=[providers], help="fetch and print one snapshot")
    p.add_argument("--pool-id", required=True)
    fmt(p, "json")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("analyze", parents=[providers], help="run one primitive on one pool")
    p.add_argument("--primitive", required=True, help=", ".join(PRIMITIVES))
    p.add_argument("--pool-id", required=True)
    p.add_argument("--arg", action="append", metavar="KEY=VALUE", help="primitive argument (repeatable)")
    fmt(p, "json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", parents=[providers], help="fork-and-evaluate over a scenario grid")
    p.add_argument("--pool-id", required=True)
    p.add_argument("--scenarios", required=True, help="comma-separated decimals")
    p.add_argument("--primitive", default="simulate_price_move")
    p.add_argument("--arg-name", default="price_change_pct")
    p.add_argument("--arg", action="append", metavar="KEY=VALUE", help="fixed primitive argument")
    p.add_argument("--field", default="position_value_after", help="numeric field to aggregate")
    p.add_argument("--workers", type=int)
    p.add_argument("--serial", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fidelity", help="paired Real/Discretized V2 trajectories against the rounding bound")
    p.add_argument("--swaps", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--reserve-bound", type=_int_or_sci, default=10**18)
    p.add_argument("--trajectories", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("serve", parents=[providers], help="JSON-RPC tool server on stdio")
    p.set_defaults(func=cmd_serve)
    return parser


def _join_negative_grid(argv: list) -> list:
    # argparse reads "--scenarios -0.3,..." as a missing value followed by an option
    out = []
    it = iter(argv)
    for token in it:
        if token == "--scenarios":
            value = next(it, None)
            out.append(token if value is None else f"--scenarios={value}")
        else:
            out.append(token)
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _join_negative_grid(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "fidelity" and (args.swaps < 0 or args.trajectories < 0):
        parser.print_usage(sys.stderr)
        print("statetwin: error: --swaps and --trajectories must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"statetwin: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StateTwinError, ValueError, ArithmeticError, OSError) as exc:
        print(f"statetwin: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
