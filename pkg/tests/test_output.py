import csv
from fractions import Fraction

import numpy as np

from smsaf.adaptive import AlgoConfig, Variant
from smsaf.harness import AlgorithmSummary, ExperimentConfig, MonteCarloResult
from smsaf.output import OutputSpec, cost_rows, emit_csv, fmt, rate_rows, trace_rows


def fake_result(names_and_variants, length=3, N=8, name="exp"):
    algos = tuple(AlgoConfig(v, name=n) for n, v in names_and_variants)
    cfg = ExperimentConfig(N=N, algo_configs=algos, name=name)
    summaries = {
        a.label: AlgorithmSummary(
            a.label, -np.arange(length, dtype=float) / 3, np.full(N, 0.25), -1.0, N, 80, 1
        )
        for a in algos
    }
    return MonteCarloResult(cfg, summaries, [])


def test_number_format():
    assert fmt(1.0) == "1"
    assert fmt(Fraction(4161)) == "4161"
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(Fraction(1, 3)) == "0.333333333"
    assert fmt(-123456.789012) == "-123456.789"


def test_single_algorithm_trace_has_header_plus_rows(tmp_path):
    res = fake_result([("a", Variant.SM_INSAF)])
    paths = emit_csv(res, OutputSpec(tmp_path, write_rates=False, write_costs=False), "x")
    lines = paths[0].read_bytes().split(b"\n")
    assert lines[-1] == b"" and b"\r" not in paths[0].read_bytes()
    assert len(lines) - 1 == 4
    assert lines[0] == b"iteration,a_nmsd_db"
    assert lines[1].startswith(b"80,")


def test_two_algorithm_columns_in_declaration_order():
    header, rows = trace_rows(fake_result([("b", Variant.INSAF), ("a", Variant.SM_INSAF)]))
    assert header == ["iteration", "b_nmsd_db", "a_nmsd_db"]
    assert rows[2] == ["82", "-0.666666667", "-0.666666667"]


def test_rate_rows():
    header, rows = rate_rows([fake_result([("x", Variant.SM_INSAF)])])
    assert header == ["algorithm"] + [f"F_up_{i}" for i in range(8)] + ["F_up"]
    assert rows == [["x"] + ["0.25"] * 9]


def test_cost_rows_for_sm_insaf():
    res = fake_result([("SM-INSAF", Variant.SM_INSAF), ("NSAF", Variant.NSAF)])
    header, rows = cost_rows([res])
    assert header == ["algorithm", "operation", "C_up", "C_nup", "F_up", "C_av"]
    mult = next(r for r in rows if r[1] == "multiplications")
    assert mult[:3] == ["SM-INSAF", "multiplications", "4161"]
    assert len(rows) == 4  # NSAF has no cost row


def test_emit_all(tmp_path):
    res = [fake_result([("a", Variant.SM_INSAF)], name="e1"), fake_result([("b", Variant.SSM_INSAF)], N=4, name="e2")]
    paths = emit_csv(res, OutputSpec(tmp_path / "nested"), "run")
    assert [p.name for p in paths] == ["e1_nmsd.csv", "e2_nmsd.csv", "run_rates.csv", "run_costs.csv"]
    with open(paths[2], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[2][5:] == ["", "", "", "", "0.25"]
