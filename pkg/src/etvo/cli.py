"""Command line front end.

Subcommands:
  analyze   align an input/output CSV pair, write a metric report (JSON)
            and a per-sample series CSV
  simulate  push an input CSV through the channel model, write the output
            CSV and a packet log
  sweep     metrics across a log grid of the proportional penalty
  compare   per-sample ETO vs the classic DTW path offset
  verify    cross-check the fast aligner against the exhaustive oracle

Exit codes: 0 success, 1 verification/invariant failure, 2 input error.
Every command is deterministic given its inputs and --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .alignment import AlignmentConfig, align, fast_forward
from .channel import ChannelConfig, make_channel_pair, simulate
from .dtw import dtw_align
from .errors import EtvoError
from .metrics import auto_tune, compute_report
from .oracle import brute_force_align
from .signals import Signal, load_csv, make_aligned_pair, save_csv


def _window_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dt-min", type=float, required=True,
                        help="smallest searched delay, seconds")
    parser.add_argument("--dt-max", type=float, required=True,
                        help="exclusive upper delay bound, seconds")


def _penalty_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p-prop", type=float, default=None,
                        help="penalty per delay step changed")
    parser.add_argument("--p-fixed", type=float, default=None,
                        help="penalty per adjustment event")
    parser.add_argument("--p-slack", type=float, default=None,
                        help="hysteresis penalty added after an adjustment")
    parser.add_argument("--auto-tune", action="store_true",
                        help="derive penalties from the input's average speed")


def _resolve_penalties(args, input_signal: Signal) -> tuple[float, float, float]:
    if args.auto_tune:
        tuned = auto_tune(input_signal)
        return (
            tuned.p_prop if args.p_prop is None else args.p_prop,
            tuned.p_fixed if args.p_fixed is None else args.p_fixed,
            tuned.p_slack if args.p_slack is None else args.p_slack,
        )
    if args.p_prop is None or args.p_fixed is None:
        raise EtvoError("either pass --p-prop and --p-fixed or use --auto-tune")
    return args.p_prop, args.p_fixed, args.p_slack if args.p_slack is not None else 0.0


def _build_pair(args):
    input_signal = load_csv(args.input)
    output_signal = load_csv(args.output)
    return input_signal, make_aligned_pair(
        input_signal, output_signal, args.dt_min, args.dt_max, pad=args.pad
    )


def _time_aligned_input(pair) -> np.ndarray:
    """Input samples at (or clamped near) the output timestamps, for the
    series/compare overlays."""
    n, m = pair.n, pair.m_bins
    f = pair.input.samples
    start = min(max(pair.delta_t_min_samples + m - 1, 0), len(f) - n)
    return f[start:start + n]


def cmd_analyze(args) -> int:
    input_signal, pair = _build_pair(args)
    p_prop, p_fixed, p_slack = _resolve_penalties(args, input_signal)
    cfg = AlignmentConfig.for_pair(pair, p_prop, p_fixed, p_slack)
    result = align(pair, cfg)
    report = compute_report(pair, result, cfg)

    times = pair.output.times()
    aligned = _time_aligned_input(pair)
    Path(args.report).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
    with open(args.series, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "time", "eto_s", "evo", "input", "output"])
        for k in range(pair.n):
            writer.writerow([
                k, repr(float(times[k])), repr(float(result.eto[k])),
                repr(float(result.evo[k])), repr(float(aligned[k])),
                repr(float(pair.output.samples[k])),
            ])
    print(f"wrote {args.report} and {args.series}")
    print(f"edd={report.edd:.6g} s/sample  ermse={report.ermse:.6g}  "
          f"adjustments={report.n_adjustments}")
    if args.plot:
        from . import plotting
        png = Path(args.series).with_suffix(".png")
        plotting.plot_alignment(times, result.eto, result.evo, aligned,
                                pair.output.samples, png)
        print(f"wrote {png}")
    return 0


def cmd_simulate(args) -> int:
    input_signal = load_csv(args.input)
    cfg = ChannelConfig.from_json(Path(args.channel).read_text())
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    output, log = simulate(input_signal, cfg)
    save_csv(output, args.out)
    log.to_csv(args.packets)
    print(f"wrote {args.out} and {args.packets}")
    return 0


def _parse_grid(spec: str) -> np.ndarray:
    try:
        kind, a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise EtvoError(f"bad grid spec {spec!r}, expected log:a:b:n") from None
    if kind != "log":
        raise EtvoError(f"unsupported grid kind {kind!r}, only 'log'")
    if n < 2:
        raise EtvoError("grid needs at least 2 points")
    if a <= 0 or b <= 0:
        raise EtvoError("log grid bounds must be positive")
    return np.logspace(math.log10(a), math.log10(b), n)


def cmd_sweep(args) -> int:
    input_signal = load_csv(args.input)
    if args.channel:
        cfg = ChannelConfig.from_json(Path(args.channel).read_text())
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        pair, _ = make_channel_pair(input_signal, cfg, args.dt_min, args.dt_max)
    elif args.output:
        output_signal = load_csv(args.output)
        pair = make_aligned_pair(input_signal, output_signal, args.dt_min,
                                 args.dt_max, pad=args.pad)
    else:
        raise EtvoError("pass either --channel or --output")

    grid = _parse_grid(args.p_prop_grid)
    rows = []
    for p_prop in grid:
        p_fixed = 2.0 * p_prop if args.p_fixed is None else args.p_fixed
        p_slack = p_prop if args.p_slack is None else args.p_slack
        cfg_a = AlignmentConfig.for_pair(pair, p_prop, p_fixed, p_slack)
        result = align(pair, cfg_a)
        report = compute_report(pair, result, cfg_a)
        rows.append((p_prop, report.edd, report.ermse, report.n_adjustments))

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["p_prop", "edd", "ermse", "n_adjustments"])
        for row in rows:
            writer.writerow([repr(float(row[0])), repr(float(row[1])),
                             repr(float(row[2])), row[3]])
    print(f"wrote {args.out} ({len(rows)} grid points)")
    if args.plot:
        from . import plotting
        png = Path(args.out).with_suffix(".png")
        plotting.plot_sweep([r[0] for r in rows], [r[1] for r in rows],
                            [r[2] for r in rows], png)
        print(f"wrote {png}")
    return 0


def cmd_compare(args) -> int:
    input_signal, pair = _build_pair(args)
    p_prop, p_fixed, p_slack = _resolve_penalties(args, input_signal)
    cfg = AlignmentConfig.for_pair(pair, p_prop, p_fixed, p_slack)
    result = align(pair, cfg)

    # classic DTW runs on the time-aligned input slice
    n = pair.n
    f_slice = Signal(_time_aligned_input(pair), pair.sample_period,
                     pair.output.start_time)
    dtw = dtw_align(f_slice, pair.output)
    dtw_offsets = dtw.offset_per_output_index()

    times = pair.output.times()
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "time", "eto_etvo_s", "offset_dtw_s", "evo",
                         "input", "output"])
        for k in range(n):
            writer.writerow([
                k, repr(float(times[k])), repr(float(result.eto[k])),
                repr(float(dtw_offsets[k])), repr(float(result.evo[k])),
                repr(float(f_slice.samples[k])), repr(float(pair.output.samples[k])),
            ])
    print(f"wrote {args.out}")
    print(f"stddev(eto)={float(np.std(result.eto)):.6g}  "
          f"stddev(dtw offset)={float(np.std(dtw_offsets)):.6g}")
    if args.plot:
        from . import plotting
        png = Path(args.out).with_suffix(".png")
        plotting.plot_compare(times, result.eto, dtw_offsets,
                              f_slice.samples, pair.output.samples, png)
        print(f"wrote {png}")
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise EtvoError("--trials must be >= 1")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    from .signals import aligned_pair_from_arrays
    for _ in range(args.trials):
        n = int(rng.integers(1, args.n_max + 1))
        m = int(rng.integers(1, args.m_max + 1))
        f = rng.uniform(-1, 1, n + m - 1)
        g = rng.uniform(-1, 1, n)
        pair = aligned_pair_from_arrays(f, g, delta_t_min_samples=0, m_bins=m)
        cfg = AlignmentConfig.for_pair(pair, p_prop=float(rng.uniform(0, 1)),
                                       p_fixed=float(rng.uniform(0, 1)), p_slack=0.0)
        fast = fast_forward(pair, cfg).total_cost
        oracle = brute_force_align(pair, cfg).cost
        scale = max(abs(oracle), 1.0)
        worst = max(worst, abs(fast - oracle) / scale)
    ok = worst <= 1e-9
    print(f"{args.trials} trials, max relative cost discrepancy {worst:.3e}: "
          f"{'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etvo", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="align a pair and write metrics + series")
    p.add_argument("input", help="input signal CSV (time,value)")
    p.add_argument("output", help="output signal CSV (time,value)")
    _window_args(p)
    _penalty_args(p)
    p.add_argument("--pad", choices=["edge", "error"], default="error")
    p.add_argument("--report", default="report.json")
    p.add_argument("--series", default="series.csv")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the series")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="run the channel model over an input CSV")
    p.add_argument("input")
    p.add_argument("channel", help="channel config JSON")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default="output.csv")
    p.add_argument("--packets", default="packets.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="metrics across a proportional-penalty grid")
    p.add_argument("input")
    p.add_argument("--channel", default=None, help="channel config JSON to simulate")
    p.add_argument("--output", default=None, help="pre-made output CSV")
    _window_args(p)
    p.add_argument("--p-prop-grid", default="log:1e-6:1e2:20",
                   help="grid spec log:a:b:n")
    p.add_argument("--p-fixed", type=float, default=None,
                   help="override the 2*p_prop recipe")
    p.add_argument("--p-slack", type=float, default=None,
                   help="override the p_prop recipe")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pad", choices=["edge", "error"], default="error")
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="ETO vs the classic DTW path offset")
    p.add_argument("input")
    p.add_argument("output")
    _window_args(p)
    _penalty_args(p)
    p.add_argument("--pad", choices=["edge", "error"], default="error")
    p.add_argument("--out", default="compare.csv")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="cross-check the aligner against the oracle")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--m-max", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (EtvoError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
