"""Command line: ``newsflow simulate|hurst|cwt|render``.

Exit codes: 0 success, 1 I/O failure, 2 invalid configuration or input,
3 analysis undefined for the data (constant or too-short series).
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import model
from .cwt import WaveletSpec, cwt, magnitude, parse_scale_spec, read_scaleogram_csv, write_scaleogram_csv
from .errors import AnalysisError, ConfigError, SeriesParseError
from .render import scaleogram_to_image, write_pgm
from .rs import DEFAULT_MIN_N, hurst_dynamics, hurst_point
from .timeseries import read_series_csv, write_series_csv

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_ANALYSIS = 0, 1, 2, 3

BUILTIN_CONFIGS = ("case1", "case2", "case3")


def builtin_config(name: str) -> str:
    return resources.files("newsflow").joinpath("configs", f"{name}.json").read_text("utf-8")


def _read_config(ref: str) -> dict:
    if ref in BUILTIN_CONFIGS and not Path(ref).exists():
        text = builtin_config(ref)
    else:
        text = Path(ref).read_text("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return doc


def _int_field(doc: dict, key: str, override, minimum: int) -> int | None:
    v = override if override is not None else doc.get(key)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {v!r}")
    return v


def _run_path(out: str, i: int, n_runs: int) -> Path:
    if n_runs == 1:
        return Path(out)
    if "{i}" in out:
        return Path(out.replace("{i}", str(i)))
    p = Path(out)
    return p.with_name(f"{p.stem}_run{i:03d}{p.suffix}")


def cmd_simulate(args) -> int:
    doc = _read_config(args.config)
    schedule = model.schedule_from_dict(doc)
    steps = _int_field(doc, "steps", args.steps, 1) or model.DEFAULT_STEPS
    seed = _int_field(doc, "seed", args.seed, 0) or 0
    n_runs = _int_field({}, "runs", args.runs, 1)

    for i in range(n_runs):
        run_seed = seed if n_runs == 1 else model.derive_seed(seed, i)
        series, state = model.simulate(schedule, steps, run_seed)
        path = _run_path(args.out, i, n_runs)
        path.write_bytes(write_series_csv(series))
        print(f"run={i} seed={run_seed} steps={steps} final_population={state.size} "
              f"births_spawn={state.births_spawn} births_repost={state.births_repost} "
              f"deaths={state.deaths} out={path}")
    return EXIT_OK


def cmd_hurst(args) -> int:
    series = read_series_csv(Path(args.input).read_bytes())
    if not args.dynamics:
        report = hurst_point(series)
        if report.out_of_range:
            print(f"warning: Hurst estimate {report.hurst!r} lies outside [0, 1]", file=sys.stderr)
        print(json.dumps(report.to_dict()))
        return EXIT_OK
    dyn = hurst_dynamics(series, mode=args.mode, window=args.window, min_n=args.min_n)
    data = write_series_csv(dyn)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_cwt(args) -> int:
    scales = parse_scale_spec(args.scales) if args.scales else None
    spec = WaveletSpec(args.order)
    series = read_series_csv(Path(args.input).read_bytes())
    sg = cwt(series, spec, scales, center=not args.no_center)
    Path(args.out).write_bytes(write_scaleogram_csv(sg))
    if args.pgm:
        Path(args.pgm).write_bytes(write_pgm(scaleogram_to_image(magnitude(sg), args.map)))
    return EXIT_OK


def cmd_render(args) -> int:
    sg = read_scaleogram_csv(Path(args.input).read_bytes())
    Path(args.out).write_bytes(write_pgm(scaleogram_to_image(magnitude(sg), args.map)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newsflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the multiagent model and write the volume series")
    p.add_argument("--config", required=True,
                   help="schedule JSON file, or one of case1/case2/case3 for the bundled recipes")
    p.add_argument("--steps", type=int, help="ticks to simulate (overrides config)")
    p.add_argument("--seed", type=int, help="random seed (overrides config)")
    p.add_argument("--runs", type=int, default=1,
                   help="ensemble size; run i writes OUT with _runNNN or {i} substituted")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hurst", help="R/S Hurst exponent of a series CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--dynamics", action="store_true", help="write H as a function of time")
    p.add_argument("--mode", choices=("prefix", "window"), default="prefix")
    p.add_argument("--window", type=int)
    p.add_argument("--min-n", type=int, default=DEFAULT_MIN_N)
    p.add_argument("--out", help="dynamics CSV path (default: stdout)")
    p.set_defaults(func=cmd_hurst)

    p = sub.add_parser("cwt", help="wavelet scaleogram of a series CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--order", type=int, default=1, help="derivative-of-Gaussian order 1..4")
    p.add_argument("--scales", help="min:max:count, log-spaced (default 1:N/4:64)")
    p.add_argument("--out", required=True, help="coefficient matrix CSV")
    p.add_argument("--pgm", help="also write the magnitude image here")
    p.add_argument("--map", choices=("log", "linear"), default="log")
    p.add_argument("--no-center", action="store_true", help="do not subtract the series mean")
    p.set_defaults(func=cmd_cwt)

    p = sub.add_parser("render", help="scaleogram CSV to PGM")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--map", choices=("log", "linear"), default="log")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, SeriesParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
