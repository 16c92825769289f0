"""CSV export of NMSD traces, update rates and cost reports."""

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .costs import OPERATIONS, cost_model
from .errors import UnsupportedAlgorithmError


@dataclass(frozen=True)
class OutputSpec:
    out_dir: Path
    write_traces: bool = True
    write_rates: bool = True
    write_costs: bool = True


def fmt(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.9g}"


def _write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def trace_rows(result):
    """Header and rows of the NMSD traces, one column per algorithm."""
    summaries = [result.algorithms[a.label] for a in result.config.algo_configs]
    header = ["iteration"] + [f"{s.name}_nmsd_db" for s in summaries]
    length = max((s.nmsd_db.size for s in summaries), default=0)
    first = min((s.first_iteration for s in summaries if s.nmsd_db.size), default=0)
    rows = []
    for idx in range(length):
        row = [str(first + idx)]
        row += [fmt(s.nmsd_db[idx]) if idx < s.nmsd_db.size else "" for s in summaries]
        rows.append(row)
    return header, rows


def rate_rows(results):
    """One row per algorithm: F_up_0 .. F_up_{N-1} and the average."""
    width = max(r.config.N for r in results)
    header = ["algorithm"] + [f"F_up_{i}" for i in range(width)] + ["F_up"]
    rows = []
    for res in results:
        for algo in res.config.algo_configs:
            s = res.algorithms[algo.label]
            cells = [fmt(v) for v in s.update_rates] + [""] * (width - s.update_rates.size)
            rows.append([s.name, *cells, fmt(s.mean_update_rate)])
    return header, rows


def cost_rows(results):
    """One row per algorithm and operation class, at the measured F_up."""
    header = ["algorithm", "operation", "C_up", "C_nup", "F_up", "C_av"]
    rows = []
    for res in results:
        cfg = res.config
        for algo in cfg.algo_configs:
            s = res.algorithms[algo.label]
            rate = s.mean_update_rate
            if rate != rate:  # every trial diverged
                continue
            try:
                report = cost_model(algo, cfg.M, cfg.N, cfg.L, rate)
            except UnsupportedAlgorithmError:
                continue
            for op in OPERATIONS:
                rows.append([
                    s.name,
                    op,
                    fmt(getattr(report.update, op)),
                    fmt(getattr(report.no_update, op)),
                    fmt(rate),
                    fmt(getattr(report.average, op)),
                ])
    return header, rows


def emit_csv(results, spec, stem):
    """Write traces (one file per experiment), rates and costs; return the paths."""
    if not isinstance(results, (list, tuple)):
        results = [results]
    out = Path(spec.out_dir)
    written = []
    if spec.write_traces:
        for res in results:
            written.append(_write(out / f"{res.config.name}_nmsd.csv", *trace_rows(res)))
    if spec.write_rates:
        written.append(_write(out / f"{stem}_rates.csv", *rate_rows(results)))
    if spec.write_costs:
        written.append(_write(out / f"{stem}_costs.csv", *cost_rows(results)))
    return written
