"""Command-line entry point: run a preset or a JSON experiment and write CSVs.

Exit status: 0 success, 1 invalid configuration or preset, 2 divergence,
3 I/O failure.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import config as cfgmod
from .errors import AudioFormatError, ConfigError, DivergenceError
from .harness import monte_carlo
from .output import OutputSpec, emit_csv
from .presets import PRESET_NAMES, get_preset

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_IO = 0, 1, 2, 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="smsaf",
        description="Monte-Carlo echo-cancellation runs for set-membership subband adaptive filters.",
    )
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", metavar="NAME", help=f"one of: {', '.join(PRESET_NAMES)}")
    src.add_argument("--config", metavar="FILE", type=Path, help="JSON experiment file")
    src.add_argument("--list-presets", action="store_true", help="print the presets and exit")
    p.add_argument("--trials", type=int, metavar="R", help="trials per experiment (default 10)")
    p.add_argument("--seed", type=int, metavar="S", help="base seed; trial r uses S + r")
    p.add_argument("--out", type=Path, default=Path("results"), metavar="DIR", help="output directory")
    p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key; NAME.KEY targets one algorithm (repeatable)",
    )
    p.add_argument("--workers", type=int, default=1, help="worker processes for the trials")
    p.add_argument("--no-traces", action="store_true", help="skip the NMSD trace files")
    p.add_argument("--no-costs", action="store_true", help="skip the cost report")
    return p


def _experiments(args):
    if args.preset is not None:
        preset = get_preset(args.preset)
        return preset.name, list(preset.experiments)
    cfg = cfgmod.parse_config(args.config)
    return args.config.stem, [cfg]


def _prepare(experiments, args):
    pairs = [cfgmod.parse_override(s) for s in args.overrides]
    out = []
    for cfg in experiments:
        cfg = cfgmod.apply_overrides(cfg, pairs)
        changes = {}
        if args.trials is not None:
            changes["trials"] = args.trials
        if args.seed is not None:
            changes["base_seed"] = args.seed
        out.append(replace(cfg, **changes) if changes else cfg)
    return out


def summary_table(results):
    rows = [("experiment", "algorithm", "final NMSD (dB)", "F_up", "trials")]
    for res in results:
        for algo in res.config.algo_configs:
            s = res.algorithms[algo.label]
            rows.append((res.config.name, s.name, f"{s.final_nmsd_db:.2f}", f"{s.mean_update_rate:.3f}", str(s.trials)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def run(args, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if args.list_presets:
        for name in PRESET_NAMES:
            print(f"{name:8s}  {get_preset(name).description}", file=stdout)
        return EXIT_OK
    if args.trials is not None and args.trials < 1:
        print("error: --trials must be >= 1", file=stderr)
        return EXIT_CONFIG
    try:
        stem, experiments = _experiments(args)
        experiments = _prepare(experiments, args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO

    results, divergences = [], []
    try:
        for cfg in experiments:
            res = monte_carlo(cfg, workers=args.workers)
            results.append(res)
            divergences.extend(res.divergences)
        spec = OutputSpec(args.out, write_traces=not args.no_traces, write_costs=not args.no_costs)
        written = emit_csv(results, spec, stem)
    except ConfigError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (OSError, AudioFormatError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO

    print(summary_table(results), file=stdout)
    for path in written:
        print(f"wrote {path}", file=stdout)
    if divergences:
        print(str(DivergenceError(divergences)), file=stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def run_preset(name, overrides=(), out=Path("results"), trials=None, seed=None, workers=1):
    argv = ["--preset", name, "--out", str(out), "--workers", str(workers)]
    for key, value in dict(overrides).items():
        text = value if isinstance(value, str) else json.dumps(value)
        argv += ["--set", f"{key}={text}"]
    if trials is not None:
        argv += ["--trials", str(trials)]
    if seed is not None:
        argv += ["--seed", str(seed)]
    return main(argv)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 is reserved for divergence here
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
