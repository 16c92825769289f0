"""JSON experiment files and ``key=value`` overrides.

A config file is one flat JSON object. Experiment keys mirror
ExperimentConfig fields. Algorithm keys (``variant``, ``mu``, ``P``, ``rho``,
``t``, ``lambda``, ``zeta``, ``kappa``, ``delta``, ``name``) at the top level
are defaults for every entry of ``algo_configs``; without an
``algo_configs`` list they describe the single algorithm to run.

    {"N": 8, "snr_db": 10, "P": 2,
     "algo_configs": [{"variant": "SM-INSAF"}, {"variant": "SSM-INSAF", "t": 0.75}]}
"""

import json
from dataclasses import fields, replace
from pathlib import Path

from .adaptive import AlgoConfig
from .errors import ConfigError
from .harness import ExperimentConfig

EXPERIMENT_KEYS = tuple(f.name for f in fields(ExperimentConfig) if f.name != "algo_configs")
ALGO_KEYS = tuple("lambda" if f.name == "lam" else f.name for f in fields(AlgoConfig))


def _algo(entry, defaults, where):
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: algorithm entry must be a JSON object")
    unknown = sorted(set(entry) - set(ALGO_KEYS))
    if unknown:
        raise ConfigError(f"{where}: unknown algorithm key(s) {', '.join(unknown)}")
    try:
        return AlgoConfig.from_dict({**defaults, **entry})
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def config_from_dict(data, source="config"):
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a JSON object")
    known = set(EXPERIMENT_KEYS) | set(ALGO_KEYS) | {"algo_configs"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown key(s) {', '.join(unknown)}")

    defaults = {k: data[k] for k in ALGO_KEYS if k in data}
    entries = data.get("algo_configs")
    if entries is None:
        algos = (_algo({}, defaults, source),)
    elif not isinstance(entries, list) or not entries:
        raise ConfigError(f"{source}: algo_configs must be a non-empty list")
    else:
        algos = tuple(_algo(e, defaults, f"{source}: algo_configs[{i}]") for i, e in enumerate(entries))

    exp = {k: data[k] for k in EXPERIMENT_KEYS if k in data}
    try:
        return ExperimentConfig(algo_configs=algos, **exp)
    except TypeError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def parse_config(path):
    """Read and validate an experiment file.

    Malformed JSON raises ConfigError with the line and column; missing or
    unreadable files raise OSError.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return config_from_dict(data, str(path))


def config_to_json(cfg):
    return json.dumps(cfg.to_dict(), indent=2) + "\n"


def save_config(path, cfg):
    Path(path).write_text(config_to_json(cfg), encoding="utf-8")


def parse_override(text):
    """Split ``key=value``; the value is read as JSON, falling back to a string."""
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"override must look like key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(cfg, overrides):
    """Apply ``(key, value)`` pairs to an experiment.

    Experiment keys replace the field. Algorithm keys apply to every
    algorithm, or to one when written ``<algorithm name>.<key>``.
    """
    for key, value in overrides:
        target, dot, attr = key.rpartition(".")
        if not dot:
            attr = key
        if attr == "algo_configs":
            raise ConfigError("algo_configs cannot be overridden with --set")
        if not dot and attr in EXPERIMENT_KEYS:
            cfg = _replace(cfg, attr, value)
            continue
        if attr not in ALGO_KEYS:
            raise ConfigError(f"unknown override key {key!r}")
        labels = [a.label for a in cfg.algo_configs]
        if dot and target not in labels:
            raise ConfigError(f"override {key!r}: no algorithm named {target!r} (have {', '.join(labels)})")
        field_name = "lam" if attr == "lambda" else attr
        algos = tuple(
            _replace(a, field_name, value) if not dot or a.label == target else a for a in cfg.algo_configs
        )
        cfg = replace(cfg, algo_configs=algos)
    return cfg


def _replace(obj, name, value):
    try:
        return replace(obj, **{name: value})
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from None
