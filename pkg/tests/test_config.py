import json

import pytest
from hypothesis import given, settings, strategies as st

from smsaf.adaptive import AlgoConfig, Variant
from smsaf.config import (
    apply_overrides,
    config_from_dict,
    config_to_json,
    parse_config,
    parse_override,
    save_config,
)
from smsaf.errors import ConfigError
from smsaf.harness import ExperimentConfig


def write(tmp_path, text):
    p = tmp_path / "exp.json"
    p.write_text(text)
    return p


def test_empty_object_gives_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, "{}"))
    assert (cfg.N, cfg.M, cfg.snr_db) == (8, 512, 10.0)
    (algo,) = cfg.algo_configs
    assert (algo.P, algo.rho, algo.lam, algo.zeta) == (2, 1.0, 0.0, 1e-4)


def test_rho_out_of_range(tmp_path):
    with pytest.raises(ConfigError, match=r"rho must lie in \(0,1\]"):
        parse_config(write(tmp_path, '{"rho": 1.5}'))


def test_syntax_error_reports_position(tmp_path):
    with pytest.raises(ConfigError, match=r"exp.json:3:\d+"):
        parse_config(write(tmp_path, '{\n  "N": 8,\n  "M": ,\n}'))


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(write(tmp_path, '{"subbands": 8}'))
    with pytest.raises(ConfigError, match="algo_configs\\[1\\]"):
        parse_config(write(tmp_path, '{"algo_configs": [{}, {"stepsize": 1}]}'))


def test_bad_types_become_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, '{"rho": "high"}'))
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "[1, 2]"))


def test_missing_file_is_os_error(tmp_path):
    with pytest.raises(OSError):
        parse_config(tmp_path / "nope.json")


def test_top_level_algorithm_keys_are_defaults(tmp_path):
    text = json.dumps(
        {
            "N": 4,
            "P": 3,
            "lambda": -0.5,
            "algo_configs": [{"variant": "SM-IP-INSAF"}, {"variant": "SSM-IP-INSAF", "P": 1}],
        }
    )
    cfg = parse_config(write(tmp_path, text))
    a, b = cfg.algo_configs
    assert (a.P, a.lam, b.P, b.lam) == (3, -0.5, 1, -0.5)
    assert b.t == 0.75


def test_round_trip(tmp_path):
    cfg = ExperimentConfig(
        input_kind="speechlike",
        path_kind="sparse",
        N=4,
        M=256,
        snr_db=15.0,
        shift_at_half=True,
        algo_configs=(AlgoConfig(Variant.SSM_IP_INSAF, lam=-0.5, name="a"), AlgoConfig(Variant.NSAF)),
        trials=3,
        base_seed=9,
    )
    save_config(tmp_path / "c.json", cfg)
    assert parse_config(tmp_path / "c.json") == cfg


@settings(max_examples=40, deadline=None)
@given(
    N=st.sampled_from([1, 2, 4, 8, 16]),
    snr=st.floats(-10, 40),
    variant=st.sampled_from(list(Variant)),
    P=st.integers(1, 5),
    rho=st.floats(0.01, 1.0),
    lam=st.floats(-1, 1),
    seed=st.integers(0, 2**31),
)
def test_round_trip_property(N, snr, variant, P, rho, lam, seed):
    cfg = ExperimentConfig(
        N=N, snr_db=snr, base_seed=seed, algo_configs=(AlgoConfig(variant, P=P, rho=rho, lam=lam),)
    )
    assert config_from_dict(json.loads(config_to_json(cfg))) == cfg


def test_parse_override():
    assert parse_override("trials=3") == ("trials", 3)
    assert parse_override("input_kind=wgn") == ("input_kind", "wgn")
    assert parse_override("shift_at_half=true") == ("shift_at_half", True)
    assert parse_override("SM-INSAF.t=1.5") == ("SM-INSAF.t", 1.5)
    with pytest.raises(ConfigError):
        parse_override("trials")


def test_apply_overrides():
    cfg = ExperimentConfig(algo_configs=(AlgoConfig(Variant.SM_INSAF), AlgoConfig(Variant.SSM_INSAF)))
    out = apply_overrides(cfg, [("snr_db", 20), ("rho", 0.5), ("SSM-INSAF.t", 0.9), ("lambda", -0.5)])
    a, b = out.algo_configs
    assert out.snr_db == 20 and a.rho == b.rho == 0.5
    assert (a.t, b.t) == (2.0, 0.9)
    assert a.lam == -0.5
    for bad in (("nope", 1), ("XYZ.t", 1), ("rho", 3.0), ("algo_configs", [])):
        with pytest.raises(ConfigError):
            apply_overrides(cfg, [bad])
