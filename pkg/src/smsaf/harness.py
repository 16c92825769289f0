"""Echo-cancellation simulations in the delayless open-loop structure.

A trial synthesizes u(n) and d(n) = (u * w_o)(n) + eta(n), splits both
through the analysis bank, and runs one ``adapt_step`` per decimated
index. The fullband copy of the weights (the one NMSD is measured on)
only changes at those indices.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import signals
from .adaptive import AlgoConfig, SmoothState, WeightHistory, adapt_step, threshold_gamma
from .errors import ConfigError, DivergenceError
from .filterbank import SubbandAnalysis, build_analysis_bank, design_prototype

DIVERGENCE_DB = 50.0
NMSD_FLOOR_DB = -320.0
STEADY_STATE_FRACTION = 0.1
# Passband gain of the analysis filters. It fixes the subband noise level
# relative to the set-membership bound gamma = sqrt(t sigma^2 / N), and
# therefore the update rates. 1.2 gives SM update rates near 0.3 at t=2;
# 1.0 is a unit-gain bank and sqrt(N) a unit-energy one.
DEFAULT_BANK_GAIN = 1.2

INPUT_KINDS = ("ar1", "wgn", "wav", "speechlike")
PATH_KINDS = ("sparse", "dispersive")


@dataclass(frozen=True)
class ExperimentConfig:
    input_kind: str = "ar1"
    path_kind: str = "dispersive"
    M: int = 512
    N: int = 8
    snr_db: float = 10.0
    num_samples: int = 100_000
    shift_at_half: bool = False
    shift_amount: int = 12
    algo_configs: tuple = (AlgoConfig(),)
    trials: int = 10
    base_seed: int = 0
    path_seed: int = 0
    ar_pole: float = 0.9
    input_path: str | None = None
    filter_length: int | None = None
    attenuation_db: float = 60.0
    bank_gain: float = DEFAULT_BANK_GAIN
    name: str = "experiment"

    def __post_init__(self):
        algos = tuple(
            a if isinstance(a, AlgoConfig) else AlgoConfig.from_dict(a) for a in self.algo_configs
        )
        object.__setattr__(self, "algo_configs", algos)
        if self.input_kind not in INPUT_KINDS:
            raise ConfigError(f"input_kind must be one of {', '.join(INPUT_KINDS)}")
        if self.input_kind == "wav" and not self.input_path:
            raise ConfigError("input_kind 'wav' requires input_path")
        if self.path_kind not in PATH_KINDS:
            raise ConfigError(f"path_kind must be one of {', '.join(PATH_KINDS)}")
        if self.M < 64:
            raise ConfigError("M must be >= 64")
        if self.N < 1:
            raise ConfigError("N must be >= 1")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.shift_amount < self.M:
            raise ConfigError("shift_amount must lie in [0, M)")
        if not abs(self.ar_pole) < 1:
            raise ConfigError("ar_pole must satisfy |ar_pole| < 1")
        if self.bank_gain <= 0:
            raise ConfigError("bank_gain must be > 0")
        if self.filter_length is not None and self.filter_length % (2 * self.N):
            raise ConfigError("filter_length must be a multiple of 2N")
        if not algos:
            raise ConfigError("algo_configs must not be empty")
        labels = [a.label for a in algos]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"algorithm names must be unique, got {labels}")

    @property
    def L(self):
        return self.filter_length or 16 * self.N

    def to_dict(self):
        d = asdict(self)
        d["algo_configs"] = [a.to_dict() for a in self.algo_configs]
        return d


@dataclass
class Scenario:
    """Everything shared by the algorithms of one trial."""

    u: np.ndarray
    d: np.ndarray
    path: signals.EchoPath
    shifted_path: signals.EchoPath | None
    shift_sample: int | None
    noise_variance: float
    input_power: float
    analysis: SubbandAnalysis


@dataclass
class TrialResult:
    nmsd_db: np.ndarray
    update_counts: np.ndarray
    total_iterations: np.ndarray
    final_nmsd_db: float
    samples_per_iteration: int
    first_iteration: int
    step_sizes: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    @property
    def sample_index(self):
        k = self.first_iteration + np.arange(self.nmsd_db.size)
        return k * self.samples_per_iteration


@dataclass(frozen=True)
class DivergenceReport:
    algorithm: str
    seed: int
    iteration: int
    nmsd_db: float

    def __str__(self):
        return (
            f"{self.algorithm} (seed {self.seed}) diverged at iteration {self.iteration}: "
            f"NMSD {self.nmsd_db:.1f} dB"
        )


def nmsd(w, w_o):
    """``10 log10(||w_o - w||^2 / ||w_o||^2)``, clamped below at -320 dB."""
    w_o = np.asarray(w_o, dtype=float)
    ref = float(w_o @ w_o)
    if ref == 0.0:
        raise ValueError("reference path has zero norm")
    diff = w_o - np.asarray(w, dtype=float)
    err = float(diff @ diff)
    if err == 0.0:
        return NMSD_FLOOR_DB
    return max(10.0 * math.log10(err / ref), NMSD_FLOOR_DB)


def _input_signal(cfg, seed):
    n = cfg.num_samples
    if cfg.input_kind == "ar1":
        return signals.gen_ar1(seed, n, cfg.ar_pole).samples
    if cfg.input_kind == "wgn":
        return signals.gen_wgn(seed, n, 1.0).samples
    if cfg.input_kind == "speechlike":
        return signals.gen_speechlike(seed, n).samples
    x = signals.load_audio(cfg.input_path).samples
    if x.size < n:
        x = np.resize(x, n)
    return x[:n]


@lru_cache(maxsize=32)
def _bank(N, L, attenuation_db, gain):
    return build_analysis_bank(design_prototype(N, L, attenuation_db), gain=gain)


def make_bank(cfg):
    return _bank(cfg.N, cfg.L, cfg.attenuation_db, cfg.bank_gain)


def build_scenario(cfg, seed, bank=None):
    """Synthesize the signals of one trial.

    The echo path is fixed by ``cfg.path_seed``; input and noise are drawn
    from independent streams derived from ``seed``.
    """
    input_seed, noise_seed = np.random.SeedSequence(seed).spawn(2)
    u = _input_signal(cfg, input_seed)
    path = signals.make_echo_path(cfg.path_kind, cfg.M, cfg.path_seed)
    y = signals.echo(u, path)
    shifted, shift_sample = None, None
    if cfg.shift_at_half:
        shift_sample = cfg.num_samples // 2
        shifted = signals.shift_path(path, cfg.shift_amount)
        y[shift_sample:] = signals.echo(u, shifted)[shift_sample:]
    sigma2 = signals.noise_variance_for_snr(y, cfg.snr_db)
    d = y + np.sqrt(sigma2) * np.random.default_rng(noise_seed).standard_normal(u.size)
    bank = bank or make_bank(cfg)
    analysis = SubbandAnalysis(bank, u, d, cfg.M)
    return Scenario(u, d, path, shifted, shift_sample, sigma2, float(np.mean(u**2)), analysis)


def resolve_delta(cfg, algo, input_power):
    if algo.delta is not None:
        return algo.delta
    if cfg.input_kind in ("ar1", "wgn"):
        return 0.0
    return input_power / cfg.M if algo.variant.proportionate else input_power


def run_algorithm(cfg, scenario, algo, seed=0, keep_steps=False):
    """Adapt one algorithm over a prepared scenario.

    Raises ``DivergenceError`` as soon as NMSD exceeds +50 dB.
    """
    analysis = scenario.analysis
    N, M = analysis.N, analysis.M
    gamma = threshold_gamma(algo.t, scenario.noise_variance, N)
    delta = resolve_delta(cfg, algo, scenario.input_power)
    history = WeightHistory(M, algo.P)
    smooth = SmoothState.for_config(N, M, algo.kappa) if algo.variant.smoothed else None

    first = analysis.num_warmup
    K = analysis.num_frames - first
    trace = np.empty(K)
    counts = np.zeros(N, dtype=np.int64)
    steps = np.empty((K, N)) if keep_steps else None
    w_o = scenario.path.coeffs
    for idx in range(K):
        k = first + idx
        if scenario.shift_sample is not None and k * N >= scenario.shift_sample:
            w_o = scenario.shifted_path.coeffs
        res = adapt_step(history, analysis.frame(k), algo, smooth, gamma=gamma, delta=delta)
        history.push(res.weights)
        counts += res.updated
        if keep_steps:
            steps[idx] = res.step_sizes
        value = nmsd(res.weights, w_o)
        if not value <= DIVERGENCE_DB:
            raise DivergenceError([DivergenceReport(algo.label, seed, k, value)])
        trace[idx] = value

    tail = max(1, int(round(STEADY_STATE_FRACTION * K)))
    return TrialResult(
        nmsd_db=trace,
        update_counts=counts,
        total_iterations=np.full(N, K, dtype=np.int64),
        final_nmsd_db=float(trace[-tail:].mean()),
        samples_per_iteration=N,
        first_iteration=first,
        step_sizes=steps,
        weights=history.newest.copy(),
    )


def run_trial(cfg, algo, seed, keep_steps=False):
    scenario = build_scenario(cfg, seed)
    return run_algorithm(cfg, scenario, algo, seed, keep_steps=keep_steps)


def update_rate_report(result):
    """Per-subband update rates ``N_update,i / N_total,i`` and their mean."""
    total = np.asarray(result.total_iterations)
    if np.any(total <= 0):
        raise ValueError("total_iterations must be positive")
    rates = np.asarray(result.update_counts) / total
    return rates, float(rates.mean())


def steady_state_db(trace, fraction=STEADY_STATE_FRACTION):
    trace = np.asarray(trace)
    tail = max(1, int(round(fraction * trace.size)))
    return float(trace[-tail:].mean())


def time_to_threshold(trace, threshold_db):
    """First index where ``trace <= threshold_db``, or None."""
    hits = np.flatnonzero(np.asarray(trace) <= threshold_db)
    return int(hits[0]) if hits.size else None


@dataclass
class AlgorithmSummary:
    name: str
    nmsd_db: np.ndarray
    update_rates: np.ndarray
    final_nmsd_db: float
    samples_per_iteration: int
    first_iteration: int
    trials: int
    trial_results: list = field(default_factory=list, repr=False)

    @property
    def mean_update_rate(self):
        return float(np.mean(self.update_rates))


@dataclass
class MonteCarloResult:
    config: ExperimentConfig
    algorithms: dict
    divergences: list

    def __getitem__(self, name):
        return self.algorithms[name]


def _run_one_trial(args):
    cfg, r, keep_trials = args
    seed = cfg.base_seed + r
    scenario = build_scenario(cfg, seed)
    out = {}
    for algo in cfg.algo_configs:
        try:
            res = run_algorithm(cfg, scenario, algo, seed)
        except DivergenceError as exc:
            out[algo.label] = exc.reports
            continue
        if not keep_trials:
            res.weights = None
        out[algo.label] = res
    return r, out


def monte_carlo(cfg, workers=1, keep_trials=False):
    """Average ``cfg.trials`` seeded trials for every configured algorithm.

    Trial ``r`` uses seed ``base_seed + r`` and all algorithms see the same
    signals. NMSD is averaged in dB. Diverged runs are excluded from the
    averages and listed in ``divergences``.
    """
    jobs = [(cfg, r, keep_trials) for r in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one_trial, jobs))
    else:
        results = [_run_one_trial(j) for j in jobs]
    results.sort(key=lambda item: item[0])

    summaries, divergences = {}, []
    for algo in cfg.algo_configs:
        good = []
        for _, out in results:
            res = out[algo.label]
            if isinstance(res, TrialResult):
                good.append(res)
            else:
                divergences.extend(res)
        if good:
            trace = np.mean([g.nmsd_db for g in good], axis=0)
            rates = np.mean([update_rate_report(g)[0] for g in good], axis=0)
            spi, first = good[0].samples_per_iteration, good[0].first_iteration
        else:
            trace, rates, spi, first = np.array([]), np.full(cfg.N, np.nan), cfg.N, 0
        summaries[algo.label] = AlgorithmSummary(
            name=algo.label,
            nmsd_db=trace,
            update_rates=rates,
            final_nmsd_db=steady_state_db(trace) if trace.size else float("nan"),
            samples_per_iteration=spi,
            first_iteration=first,
            trials=len(good),
            trial_results=good if keep_trials else [],
        )
    return MonteCarloResult(cfg, summaries, divergences)


def with_algorithms(cfg, *algos, **changes):
    return replace(cfg, algo_configs=tuple(algos), **changes)
