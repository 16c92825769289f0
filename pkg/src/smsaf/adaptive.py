"""INSAF-family weight updates with set-membership step-size policies.

Every variant shares one update,

    w(k+1) = wbar(k) + sum_i mu_i(k) G u_i eps_i / (u_i^T G u_i + delta)

where ``wbar`` is the rho-weighted average of the last P weight vectors
and ``eps_i = d_i - u_i^T wbar``. Variants differ only in ``G`` (identity
or proportionate gains) and in how ``mu_i`` is chosen: fixed ``mu``,
the set-membership rule, or the smoothed set-membership rule.
"""

from collections import deque
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, SingularMatrixError


class Variant(str, Enum):
    NSAF = "NSAF"
    INSAF = "INSAF"
    IP_INSAF = "IP-INSAF"
    SM_INSAF = "SM-INSAF"
    SSM_INSAF = "SSM-INSAF"
    SM_IP_INSAF = "SM-IP-INSAF"
    SSM_IP_INSAF = "SSM-IP-INSAF"

    @property
    def set_membership(self):
        return self.value.startswith(("SM-", "SSM-"))

    @property
    def smoothed(self):
        return self.value.startswith("SSM-")

    @property
    def proportionate(self):
        return "IP-" in self.value


_DEFAULT_T = {False: 0.0, True: 2.0}


@dataclass(frozen=True)
class AlgoConfig:
    """Tunables for one algorithm run.

    ``t`` defaults to 2 for SM variants, 0.75 for SSM variants and 0
    otherwise. ``delta=None`` lets the harness pick the regularization
    from the input type. ``mu`` outside (0, 2) is rejected for fixed-step
    variants unless ``allow_unstable`` is set.
    """

    variant: Variant = Variant.SM_INSAF
    mu: float = 1.0
    P: int = 2
    rho: float = 1.0
    t: float | None = None
    lam: float = 0.0
    zeta: float = 1e-4
    kappa: float = 1.0
    delta: float | None = None
    name: str | None = None
    allow_unstable: bool = False

    def __post_init__(self):
        try:
            variant = Variant(self.variant)
        except ValueError:
            valid = ", ".join(v.value for v in Variant)
            raise ConfigError(f"variant must be one of {valid}, got {self.variant!r}") from None
        object.__setattr__(self, "variant", variant)
        if variant is Variant.NSAF:
            object.__setattr__(self, "P", 1)
        if self.t is None:
            t = 0.75 if variant.smoothed else _DEFAULT_T[variant.set_membership]
            object.__setattr__(self, "t", t)

        if not isinstance(self.P, (int, np.integer)) or self.P < 1:
            raise ConfigError(f"P must be an integer >= 1, got {self.P!r}")
        if not 0.0 < self.rho <= 1.0:
            raise ConfigError("rho must lie in (0,1]")
        if self.t < 0:
            raise ConfigError("t must be >= 0")
        if not -1.0 <= self.lam <= 1.0:
            raise ConfigError("lambda must lie in [-1,1]")
        if self.zeta < 0:
            raise ConfigError("zeta must be >= 0")
        if self.kappa < 1:
            raise ConfigError("kappa must be >= 1")
        if self.delta is not None and self.delta < 0:
            raise ConfigError("delta must be >= 0")
        if not variant.set_membership and not self.allow_unstable and not 0.0 < self.mu < 2.0:
            raise ConfigError("mu must lie in (0,2) for fixed-step variants")

    @property
    def label(self):
        return self.name or self.variant.value

    def to_dict(self):
        d = asdict(self)
        d["variant"] = self.variant.value
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        return cls(**d)


class WeightHistory:
    """The P most recent weight vectors, newest first."""

    def __init__(self, M, P):
        self.M = M
        self.P = P
        self._ring = deque((np.zeros(M) for _ in range(P)), maxlen=P)

    def push(self, w):
        self._ring.appendleft(np.asarray(w, dtype=float))

    @property
    def newest(self):
        return self._ring[0]

    @property
    def vectors(self):
        return list(self._ring)

    def __len__(self):
        return len(self._ring)


def average_coefficients(P, rho):
    """``alpha * rho**p`` for p = 0..P-1; they sum to one."""
    c = rho ** np.arange(P, dtype=float)
    return c / c.sum()


def weighted_average(history, rho):
    vectors = history.vectors
    if len(vectors) == 1:
        return vectors[0].copy()
    c = average_coefficients(len(vectors), rho)
    out = c[0] * vectors[0]
    for cp, w in zip(c[1:], vectors[1:]):
        out += cp * w
    return out


@dataclass
class SubbandErrors:
    eps: np.ndarray
    gamma: np.ndarray | None = None

    @property
    def update_set(self):
        if self.gamma is None:
            return np.arange(self.eps.size)
        return np.flatnonzero(np.abs(self.eps) > self.gamma)


def subband_error(frame, wbar):
    wbar = np.asarray(wbar)
    if frame.u.shape[1] != wbar.size:
        raise ValueError(f"regressor length {frame.u.shape[1]} != weight length {wbar.size}")
    return SubbandErrors(frame.d - frame.u @ wbar)


def proportionate_gain(w, lam=0.0, zeta=1e-4):
    w = np.asarray(w, dtype=float)
    l1 = np.abs(w).sum()
    if zeta == 0 and l1 == 0:
        raise ValueError("proportionate gain undefined for zeta=0 and w=0")
    M = w.size
    return (1 - lam) / (2 * M) + (1 + lam) * np.abs(w) / (2 * l1 + zeta)


def threshold_gamma(t, sigma_eta_sq, N):
    return float(np.sqrt(t * sigma_eta_sq / N))


def sm_step_size(eps_abs, gamma):
    """Set-membership step: ``1 - gamma/|eps|`` outside the bound, else 0."""
    eps_abs = np.asarray(eps_abs, dtype=float)
    out = np.zeros(np.broadcast(eps_abs, gamma).shape)
    hit = eps_abs > gamma
    np.divide(gamma, eps_abs, out=out, where=hit)
    return np.where(hit, 1.0 - out, 0.0)


def ssm_step_size(eps_abs, sigma, gamma):
    """Smoothed step ``1 - gamma/sigma``, gated on ``min(|eps|, sigma) > gamma``."""
    eps_abs = np.asarray(eps_abs, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    out = np.zeros(np.broadcast(eps_abs, sigma, gamma).shape)
    hit = np.minimum(eps_abs, sigma) > gamma
    np.divide(gamma, sigma, out=out, where=hit)
    return np.where(hit, 1.0 - out, 0.0)


@dataclass
class SmoothState:
    sigma: np.ndarray
    beta: float

    @classmethod
    def for_config(cls, N, M, kappa=1.0):
        beta = 1.0 - N / (kappa * M)
        if not 0.0 < beta < 1.0:
            raise ConfigError(f"smoothing factor 1 - N/(kappa M) = {beta} is outside (0, 1)")
        return cls(np.zeros(N), beta)


def smooth_update(state, i, eps_abs):
    state.sigma[i] = state.beta * state.sigma[i] + (1 - state.beta) * eps_abs
    return state.sigma[i]


@dataclass
class StepResult:
    weights: np.ndarray
    step_sizes: np.ndarray
    updated: np.ndarray
    eps: np.ndarray = field(repr=False)


def adapt_step(history, frame, cfg, smooth=None, gamma=0.0, delta=None):
    """One decimated-time update; the caller pushes ``weights`` into history.

    ``gamma`` is the set-membership bound (scalar or per subband), unused
    by fixed-step variants. ``delta`` overrides ``cfg.delta``.
    """
    variant = cfg.variant
    if delta is None:
        delta = cfg.delta or 0.0
    wbar = weighted_average(history, cfg.rho)
    eps = subband_error(frame, wbar).eps
    abs_eps = np.abs(eps)

    if variant.smoothed:
        smooth.sigma[:] = smooth.beta * smooth.sigma + (1 - smooth.beta) * abs_eps
        mu = ssm_step_size(abs_eps, smooth.sigma, gamma)
    elif variant.set_membership:
        mu = sm_step_size(abs_eps, gamma)
    else:
        mu = np.full(eps.size, float(cfg.mu))

    updated = mu != 0.0
    if not updated.any():
        return StepResult(wbar, mu, updated, eps)

    u = frame.u[updated]
    gu = u * proportionate_gain(history.newest, cfg.lam, cfg.zeta) if variant.proportionate else u
    den = np.einsum("ij,ij->i", gu, u) + delta
    coef = mu[updated] * eps[updated] / den
    return StepResult(wbar + coef @ gu, mu, updated, eps)


def exact_update_oracle(history, frame, rho, gamma_vec, cond_limit=1e12):
    """Exact minimum-norm solution without the diagonal approximation.

    Solves ``wbar + U (U^T U)^{-1} (eps - b)``. Violating subbands use
    ``b_i = gamma_i sgn(eps_i)``; subbands already inside their bound use
    ``b_i = eps_i``, i.e. no correction along that direction. Only meant
    for small test instances.
    """
    wbar = weighted_average(history, rho)
    U = frame.u.T
    eps = frame.d - U.T @ wbar
    gamma_vec = np.broadcast_to(np.asarray(gamma_vec, dtype=float), eps.shape)
    b = np.where(np.abs(eps) > gamma_vec, gamma_vec * np.sign(eps), eps)
    gram = U.T @ U
    if np.linalg.cond(gram) > cond_limit:
        raise SingularMatrixError("U^T U is singular or ill-conditioned")
    return wbar + U @ np.linalg.solve(gram, eps - b)


def save_weights(path, w):
    np.savetxt(path, np.asarray(w, dtype=float).ravel(), fmt="%.17g")


def load_weights(path):
    return np.atleast_1d(np.loadtxt(path, dtype=float))
