"""Command-line entry point: ``geoling <command> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 I/O error,
4 clarification needed (``nlu`` without ``--interactive``).

Defaults for any flag can be put in a ``key=value`` file named by the
``GEOLING_CONFIG`` environment variable (keys are flag names without the
leading dashes, e.g. ``grid-distance-step=25``).  Flags override the file.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import alerts, nlu
from .fcl import DEFAULT_COG_SAMPLES, FclError, Mode, ParseError, compile_program, parse_fcl, pretty_print
from .linguistic import dumps_partition
from .partition_builder import build_partition_from_bags, read_bags

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CLARIFY = 4

CONFIG_ENV = "GEOLING_CONFIG"


class UsageError(Exception):
    pass


def read_config(path: str | Path) -> dict[str, str]:
    config = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            config[key.strip().replace("-", "_")] = value.strip()
    return config


def _mode(value: str) -> Mode:
    return Mode.UNIFORM_BASELINE if value == "uniform" else Mode.TWOFOLD


def _latlon(value: str) -> tuple[float, float]:
    try:
        lat, lon = (float(v) for v in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lat,lon, got {value!r}") from None
    return lat, lon


def _anchors(value: str) -> tuple[str, str]:
    parts = [v.strip() for v in value.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"expected LOW,HIGH, got {value!r}")
    return parts[0], parts[1]


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _load_program(path: str | None):
    if path is None:
        return alerts.load_alert1()
    return parse_fcl(Path(path).read_text(encoding="utf-8"))


def _write(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def cmd_parse_fcl(args, stdin, stdout, stderr) -> int:
    text = Path(args.path).read_text(encoding="utf-8")
    try:
        program = parse_fcl(text)
    except ParseError as exc:
        stderr.write(f"{args.path}:{exc.line}:{exc.column}: {exc.message}\n")
        return EXIT_USAGE
    _write(pretty_print(program), args.output, stdout)
    return EXIT_OK


def cmd_build_partition(args, stdin, stdout, stderr) -> int:
    if not args.bags:
        raise UsageError("--bags is required")
    if args.anchors is None:
        raise UsageError("--anchors LOW,HIGH is required")
    bags = read_bags(args.bags)
    low, high = args.anchors
    p = build_partition_from_bags(bags, args.lo, args.hi, low, high)
    _write(dumps_partition(p), args.output, stdout)
    return EXIT_OK


def _distance_partition(args):
    program = _load_program(args.fcl)
    controller = compile_program(program, _mode(args.mode), args.cog_samples)
    try:
        return controller.partition(alerts.DISTANCE)
    except KeyError:
        raise UsageError(f"the FCL program has no pairs-typed {alerts.DISTANCE} input") from None


def cmd_nlu(args, stdin, stdout, stderr) -> int:
    lex = nlu.load_lexicon(args.lexicon) if args.lexicon else nlu.stock_lexicon()
    partition = _distance_partition(args)
    tokens = nlu.analyze(args.sentence, lex)
    result = nlu.parse_frame(tokens)
    if isinstance(result, nlu.ClarificationRequest) and args.interactive:
        for slot in result.missing:
            stderr.write(f"Please specify the {slot.lower()}: ")
            stderr.flush()
            answer = stdin.readline()
            if answer.strip():
                tokens = tokens + nlu.analyze(answer, lex)
        result = nlu.parse_frame(tokens)
    if isinstance(result, nlu.ClarificationRequest):
        stdout.write(nlu.dumps_clarification(result))
        return EXIT_CLARIFY
    _write(nlu.dumps_spec(nlu.resolve_fuzzy(result, partition)), args.output, stdout)
    return EXIT_OK


def cmd_simulate(args, stdin, stdout, stderr) -> int:
    if not args.telemetry:
        raise UsageError("--telemetry is required")
    program = _load_program(args.fcl)
    controller = compile_program(program, _mode(args.mode), args.cog_samples)
    samples = alerts.read_telemetry(args.telemetry)
    if args.dest is None and any(s.distance_m is None for s in samples):
        raise UsageError("coordinate telemetry needs --dest lat,lon")
    lines = []
    for s in samples:
        ev = alerts.evaluate_alert(controller, s, args.tolerance, args.dest, args.threshold)
        lines.append(f"{_num(ev.timestamp)},{ev.trigger_value:.6f},{str(ev.fired).lower()}\n")
    _write("".join(lines), args.output, stdout)
    return EXIT_OK


def cmd_compare(args, stdin, stdout, stderr) -> int:
    program = _load_program(args.fcl)
    grid = alerts.GridSpec(args.grid_distance_step, args.grid_battery_step,
                           args.grid_tolerance_step)
    report = alerts.compare_models(program, grid, args.threshold, args.cog_samples)
    if args.output:
        Path(args.output).write_text(report.to_csv(), encoding="utf-8")
        stdout.write(report.summary())
    else:
        stdout.write(report.to_csv())
        stderr.write(report.summary())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoling",
        description="Fuzzy geofence alerts from natural-language requests.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--fcl", help="FCL script (default: the shipped Alert1 controller)")
    engine.add_argument("--mode", choices=("twofold", "uniform"), default="twofold")
    engine.add_argument("--threshold", type=float, default=alerts.DEFAULT_THRESHOLD)
    engine.add_argument("--cog-samples", type=int, default=DEFAULT_COG_SAMPLES)

    p = sub.add_parser("parse-fcl", parents=[common], help="pretty-print a parsed FCL script")
    p.add_argument("path")
    p.set_defaults(func=cmd_parse_fcl)

    p = sub.add_parser("build-partition", parents=[common],
                       help="build an unbalanced partition from synonym bags")
    p.add_argument("--bags")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--anchors", type=_anchors, help="LOW,HIGH labels fixing the scale ends")
    p.set_defaults(func=cmd_build_partition)

    p = sub.add_parser("nlu", parents=[common, engine], help="turn a request into an alert spec")
    p.add_argument("sentence")
    p.add_argument("--lexicon")
    p.add_argument("--interactive", action="store_true")
    p.set_defaults(func=cmd_nlu)

    p = sub.add_parser("simulate", parents=[common, engine], help="run telemetry through a controller")
    p.add_argument("--telemetry")
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--dest", type=_latlon, help="arrival point lat,lon")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", parents=[common, engine],
                       help="compare uniform and twofold controllers on a grid")
    p.add_argument("--grid-distance-step", type=float, default=50.0)
    p.add_argument("--grid-battery-step", type=float, default=10.0)
    p.add_argument("--grid-tolerance-step", type=float, default=60.0)
    p.set_defaults(func=cmd_compare)
    return parser


def _apply_config(parser: argparse.ArgumentParser, config: dict[str, str]) -> None:
    for action in parser._subparsers._group_actions:
        for sub in action.choices.values():
            known = {a.dest for a in sub._actions}
            # string defaults go through each argument's type conversion
            sub.set_defaults(**{k: v for k, v in config.items() if k in known})


def main(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        config_path = os.environ.get(CONFIG_ENV)
        if config_path:
            _apply_config(parser, read_config(config_path))
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        return args.func(args, stdin, stdout, stderr)
    except OSError as exc:
        stderr.write(f"geoling: {exc}\n")
        return EXIT_IO
    except (UsageError, FclError, ValueError) as exc:
        stderr.write(f"geoling: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
