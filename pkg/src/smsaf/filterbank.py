"""Cosine-modulated analysis filter bank with N-fold decimation.

The prototype is a Kaiser-windowed sinc. The Kaiser ``beta`` is found by
bisection so the stopband (``omega >= pi/N``) meets the attenuation target,
and for each ``beta`` the sinc cutoff is solved so the prototype's 3 dB
point sits exactly at ``pi/(2N)``. That second condition makes adjacent
bands cross at half power, which is what keeps the bank power
complementary.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .errors import DesignInfeasibleError, SignalLengthError

# grid used while designing; any coarser grid measures at least as much attenuation
_DESIGN_GRID = 16384
_BETA_SCAN = np.arange(0.0, 16.0 + 1e-9, 0.5)


@dataclass(frozen=True)
class PrototypeFilter:
    coeffs: np.ndarray
    num_subbands: int
    stopband_attenuation_db: float
    beta: float = float("nan")
    cutoff: float = float("nan")

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("prototype coefficients must be a non-empty 1-D array")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("prototype coefficients must be finite")
        if self.num_subbands < 1:
            raise ValueError("num_subbands must be >= 1")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def length(self):
        return self.coeffs.size

    def is_linear_phase(self, tol=1e-12):
        return bool(np.all(np.abs(self.coeffs - self.coeffs[::-1]) <= tol))


@dataclass(frozen=True)
class AnalysisBank:
    """N analysis filters, one row per subband."""

    filters: np.ndarray
    gain: float = 1.0

    def __post_init__(self):
        filters = np.atleast_2d(np.asarray(self.filters, dtype=float))
        filters.setflags(write=False)
        object.__setattr__(self, "filters", filters)

    @property
    def N(self):
        return self.filters.shape[0]

    @property
    def L(self):
        return self.filters.shape[1]


@dataclass(frozen=True)
class SubbandFrame:
    """Decimated-time snapshot.

    ``u[i, j] == u_i(kN - j)`` and ``d[i] == d_i(kN)``. Arrays are views
    into the analysis buffers and must not be modified.
    """

    k: int
    u: np.ndarray
    d: np.ndarray
    warmup: bool = False


def _lowpass(L, cutoff, beta):
    n = np.arange(L) - (L - 1) / 2
    return cutoff / np.pi * np.sinc(cutoff * n / np.pi) * np.kaiser(L, beta)


def _response_at(h, omega):
    return np.abs(np.exp(-1j * omega * np.arange(h.size)) @ h)


def _solve_cutoff(L, N, beta):
    """Cutoff placing the half-power point of the windowed sinc at pi/(2N)."""
    target = np.pi / (2 * N)
    lo, hi = target / 2, 2 * target
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        h = _lowpass(L, mid, beta)
        if _response_at(h, target) ** 2 > 0.5 * h.sum() ** 2:
            hi = mid
        else:
            lo = mid
    cutoff = 0.5 * (lo + hi)
    return cutoff, _lowpass(L, cutoff, beta)


def stopband_attenuation_db(coeffs, num_subbands, grid_size=_DESIGN_GRID):
    """Attenuation of ``max |P(w)|, w >= pi/N`` relative to the DC gain."""
    coeffs = np.asarray(coeffs, dtype=float)
    if num_subbands == 1:
        return float("inf")
    H = np.abs(np.fft.rfft(coeffs, 2 * grid_size))
    omega = np.linspace(0.0, np.pi, grid_size + 1)
    peak = H[omega >= np.pi / num_subbands].max()
    if peak == 0.0:
        return float("inf")
    return float(-20.0 * np.log10(peak / abs(H[0])))


def design_prototype(N, L=None, attenuation_target_db=60.0):
    """Design the lowpass prototype for an N-band cosine-modulated bank.

    Parameters
    ----------
    N : int
        Number of subbands.
    L : int, optional
        Filter length, a positive multiple of ``2N``. Defaults to ``16N``.
    attenuation_target_db : float
        Required stopband attenuation, measured for ``omega >= pi/N``.

    Returns
    -------
    PrototypeFilter
        Unit DC gain, symmetric taps. For ``N == 1`` there is nothing to
        split and the prototype is a unit impulse (pure passthrough).

    Raises
    ------
    DesignInfeasibleError
        If no Kaiser ``beta`` reaches the target at this length.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if L is None:
        L = 16 * N
    if L < 1 or L % (2 * N):
        raise ValueError(f"L must be a positive multiple of 2N={2 * N}, got {L}")

    if N == 1:
        coeffs = np.zeros(L)
        coeffs[0] = 1.0
        return PrototypeFilter(coeffs, 1, float("inf"), beta=0.0, cutoff=np.pi)

    def attenuation(beta):
        cutoff, h = _solve_cutoff(L, N, beta)
        return stopband_attenuation_db(h, N), cutoff, h

    # attenuation rises with beta until the main lobe spills past pi/N, so
    # scan for the first feasible point and bisect the rising edge below it
    prev = None
    for beta in _BETA_SCAN:
        att, _, _ = attenuation(beta)
        if att >= attenuation_target_db:
            break
        prev = beta
    else:
        raise DesignInfeasibleError(
            f"no Kaiser window reaches {attenuation_target_db} dB with L={L}, N={N}; "
            "increase L"
        )
    if prev is not None:
        lo, hi = prev, beta
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if attenuation(mid)[0] >= attenuation_target_db:
                hi = mid
            else:
                lo = mid
        beta = hi

    att, cutoff, h = attenuation(beta)
    h = h / h.sum()
    # exact symmetry, independent of the rounding in the sinc/window products
    h = 0.5 * (h + h[::-1])
    return PrototypeFilter(h, N, att, beta=float(beta), cutoff=float(cutoff))


def build_analysis_bank(proto, gain=1.0):
    """Modulate the prototype into ``N`` even-stacked bands.

    ``h_i(j) = 2 p(j) cos((pi/N)(i + 1/2)(j - (L-1)/2) + (-1)^i pi/4)``,
    scaled by ``gain``. With ``gain=1`` each band has unit passband gain
    and ``sum_i |H_i|^2 ~= 1``; ``gain=sqrt(N)`` gives unit-energy
    (paraunitary-normalized) filters.
    """
    N = proto.num_subbands
    p = proto.coeffs
    if N == 1:
        return AnalysisBank(gain * p[None, :], gain=gain)
    n = np.arange(p.size) - (p.size - 1) / 2
    i = np.arange(N)[:, None]
    phase = np.pi / N * (i + 0.5) * n + np.where(i % 2 == 0, 1.0, -1.0) * np.pi / 4
    return AnalysisBank(gain * 2.0 * p * np.cos(phase), gain=gain)


def warmup_frames(L, M, N):
    return -(-(L + M) // N)


class SubbandAnalysis:
    """Full-rate subband signals for a (far-end, microphone) pair.

    Filtering is done once up front; ``frame(k)`` then hands out views.
    """

    def __init__(self, bank, u, d, M):
        u = np.asarray(u, dtype=float)
        d = np.asarray(d, dtype=float)
        if u.shape != d.shape or u.ndim != 1:
            raise ValueError("u and d must be 1-D arrays of equal length")
        need = bank.L + M * bank.N
        if u.size < need:
            raise SignalLengthError(
                f"stream has {u.size} samples, analysis needs at least L + M*N = {need}"
            )
        self.bank = bank
        self.M = M
        self.N = bank.N
        # leading zeros so every regressor slice is in range
        self._pad = M - 1
        self.u_sub = np.stack([lfilter(h, 1.0, u) for h in bank.filters])
        self.d_sub = np.stack([lfilter(h, 1.0, d) for h in bank.filters])
        self._u_padded = np.concatenate(
            [np.zeros((self.N, self._pad)), self.u_sub], axis=1
        )
        self.num_frames = (u.size - 1) // self.N + 1
        self.num_warmup = min(warmup_frames(bank.L, M, self.N), self.num_frames)

    def frame(self, k):
        n = k * self.N
        start = n + self._pad - (self.M - 1)
        u = self._u_padded[:, start : n + self._pad + 1][:, ::-1]
        return SubbandFrame(k, u, self.d_sub[:, n], warmup=k < self.num_warmup)

    def __iter__(self):
        for k in range(self.num_frames):
            yield self.frame(k)


def analyze_decimate(bank, u, d, M):
    """Yield one ``SubbandFrame`` per ``N`` input samples.

    The first ``ceil((L + M)/N)`` frames carry ``warmup=True``.
    """
    return iter(SubbandAnalysis(bank, u, d, M))


@dataclass
class ParaunitaryReport:
    max_deviation_db: float
    omega: np.ndarray = field(repr=False)
    deviation_db: np.ndarray = field(repr=False)


def check_paraunitary(bank, grid_size=None):
    """Deviation of ``sum_i |H_i(e^jw)|^2`` from its mean, in dB."""
    if grid_size is None:
        grid_size = 8 * bank.L
    if grid_size < 8 * bank.L:
        raise ValueError(f"grid_size must be >= 8L = {8 * bank.L}")
    H = np.fft.rfft(bank.filters, 2 * grid_size, axis=1)
    power = np.sum(np.abs(H) ** 2, axis=0)
    omega = np.linspace(0.0, np.pi, grid_size + 1)
    with np.errstate(divide="ignore"):
        dev = 10.0 * np.log10(power / power.mean())
    return ParaunitaryReport(float(np.max(np.abs(dev))), omega, dev)


def save_coefficients(path, coeffs):
    np.savetxt(Path(path), np.asarray(coeffs, dtype=float).ravel(), fmt="%.17g")


def load_coefficients(path):
    return np.atleast_1d(np.loadtxt(Path(path), dtype=float))
