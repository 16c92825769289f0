"""Excitation signals, echo paths and background-noise calibration."""

import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .errors import AudioFormatError

SPARSE_ACTIVE_TAPS = 32


@dataclass(frozen=True)
class SignalBuffer:
    samples: np.ndarray
    sample_rate: float = 8000.0
    label: str = ""

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1:
            raise ValueError("samples must be 1-D")
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def power(self):
        return float(np.mean(self.samples**2))


@dataclass(frozen=True)
class EchoPath:
    coeffs: np.ndarray
    kind: str
    active_taps: int | None = None

    def __post_init__(self):
        w = np.asarray(self.coeffs, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("echo path must be a non-empty 1-D vector")
        if not np.any(w):
            raise ValueError("echo path must have positive energy")
        if self.kind not in ("sparse", "dispersive"):
            raise ValueError(f"unknown echo path kind {self.kind!r}")
        w.setflags(write=False)
        object.__setattr__(self, "coeffs", w)

    @property
    def M(self):
        return self.coeffs.size


@dataclass(frozen=True)
class NoiseSpec:
    variance: float
    seed: int = 0

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("noise variance must be >= 0")


def _rng(seed):
    return np.random.default_rng(seed)


def gen_ar1(seed, length, pole=0.9):
    """``x(n) = pole * x(n-1) + g(n)`` with unit-variance Gaussian ``g``."""
    if abs(pole) >= 1:
        raise ValueError(f"AR(1) pole must satisfy |pole| < 1, got {pole}")
    if length <= 0:
        raise ValueError("length must be positive")
    g = _rng(seed).standard_normal(length)
    return SignalBuffer(lfilter([1.0], [1.0, -pole], g), label=f"ar1({pole})")


def gen_wgn(seed, length, variance=1.0):
    if variance < 0:
        raise ValueError("variance must be >= 0")
    x = np.sqrt(variance) * _rng(seed).standard_normal(length)
    return SignalBuffer(x, label="wgn")


# formant-like resonances at 8 kHz: (centre Hz, pole radius)
_SPEECH_RESONANCES = ((500.0, 0.97), (1500.0, 0.95), (2500.0, 0.93), (3500.0, 0.9))
_SPEECH_TILT = 0.9


def gen_speechlike(seed, length, sample_rate=8000.0):
    """Nonstationary stand-in for speech.

    An AR(8) resonator plus a one-pole spectral tilt (speech energy sits
    mostly at low frequencies), driven by white noise and multiplied by a
    slowly varying syllabic envelope (a few Hz) that is clipped to produce
    near-silent pauses. Scaled to unit mean power.
    """
    rng = _rng(seed)
    a = np.array([1.0, -_SPEECH_TILT])
    for f0, r in _SPEECH_RESONANCES:
        theta = 2 * np.pi * f0 / sample_rate
        a = np.convolve(a, [1.0, -2 * r * np.cos(theta), r * r])
    voiced = lfilter([1.0], a, rng.standard_normal(length))

    # ~4 Hz envelope: lowpassed Gaussian noise, clipped below to make pauses
    smooth = np.exp(-2 * np.pi * 4.0 / sample_rate)
    z = lfilter([1 - smooth], [1, -smooth], rng.standard_normal(length))
    z = lfilter([1 - smooth], [1, -smooth], z)
    z /= max(z.std(), 1e-12)
    env = np.maximum(z + 0.5, 0.0) + 0.01
    x = voiced * env
    x /= np.sqrt(np.mean(x**2))
    return SignalBuffer(x, sample_rate=sample_rate, label="speechlike")


def load_audio(path):
    """Read a 16-bit PCM mono WAV, scaled by 1/32768."""
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wf:
            if wf.getcomptype() != "NONE":
                raise AudioFormatError(f"{path}: compressed WAV is not supported")
            if wf.getnchannels() != 1:
                raise AudioFormatError(f"{path}: expected mono, got {wf.getnchannels()} channels")
            if wf.getsampwidth() != 2:
                raise AudioFormatError(f"{path}: expected 16-bit samples, got {8 * wf.getsampwidth()}-bit")
            rate = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except (wave.Error, EOFError) as exc:
        raise AudioFormatError(f"{path}: not a PCM WAV file ({exc})") from exc
    x = np.frombuffer(raw, dtype="<i2").astype(float) / 32768.0
    return SignalBuffer(x, sample_rate=float(rate), label=path.stem)


def write_audio(path, buf):
    x = np.round(np.asarray(buf.samples) * 32768.0)
    pcm = np.clip(x, -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(int(round(buf.sample_rate)))
        wf.writeframes(pcm.tobytes())


def make_echo_path(kind, M=512, seed=0):
    """Synthetic unit-energy echo path.

    ``sparse``: 32 taps at random positions inside the first 80% of the
    support, Gaussian amplitudes under a decaying envelope; every active
    tap is kept above 2% of the peak so the active set is well defined.
    ``dispersive``: all taps Gaussian times ``exp(-n / (M/4))``.
    """
    if M < 64:
        raise ValueError("M must be >= 64")
    rng = _rng(seed)
    n = np.arange(M)
    if kind == "sparse":
        support = int(0.8 * M)
        pos = np.sort(rng.choice(support, SPARSE_ACTIVE_TAPS, replace=False))
        amp = rng.standard_normal(SPARSE_ACTIVE_TAPS) * np.exp(-pos / (M / 4))
        floor = 0.02 * np.abs(amp).max()
        amp = np.where(amp < 0, -1.0, 1.0) * np.maximum(np.abs(amp), floor)
        w = np.zeros(M)
        w[pos] = amp
        active = SPARSE_ACTIVE_TAPS
    elif kind == "dispersive":
        w = rng.standard_normal(M) * np.exp(-n / (M / 4))
        active = None
    else:
        raise ValueError(f"unknown echo path kind {kind!r}")
    return EchoPath(w / np.linalg.norm(w), kind, active)


def shift_path(path, shift):
    """Delay the impulse response by ``shift`` taps, truncating the tail."""
    M = path.M
    if not 0 <= shift < M:
        raise ValueError(f"shift must lie in [0, {M}), got {shift}")
    w = np.zeros(M)
    w[shift:] = path.coeffs[: M - shift]
    return EchoPath(w, path.kind, path.active_taps)


def echo(u, path):
    return lfilter(path.coeffs, [1.0], np.asarray(u, dtype=float))


def noise_variance_for_snr(echo_signal, snr_db):
    """Noise variance giving ``snr_db`` against the noiseless echo power."""
    y = echo_signal.samples if isinstance(echo_signal, SignalBuffer) else np.asarray(echo_signal)
    power = float(np.mean(y**2))
    if power <= 0.0:
        raise ValueError("echo signal has zero power")
    return power / 10.0 ** (snr_db / 10.0)


def save_path(path, echo_path):
    np.savetxt(Path(path), echo_path.coeffs, fmt="%.17g")


def load_path(path, kind="dispersive"):
    return EchoPath(np.atleast_1d(np.loadtxt(Path(path), dtype=float)), kind)
