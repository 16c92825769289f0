"""Per-input-sample operation counts and the average-cost identity.

Counts are closed-form in M (filter length), N (subbands), L (analysis
filter length) and P (reuse depth), amortized per fullband sample, so the
M/N-type terms are kept as exact fractions.
"""

from dataclasses import dataclass
from fractions import Fraction

from .adaptive import Variant
from .errors import UnsupportedAlgorithmError

OPERATIONS = ("additions", "multiplications", "divisions", "comparisons")


@dataclass(frozen=True)
class OpCounts:
    additions: Fraction
    multiplications: Fraction
    divisions: Fraction
    comparisons: Fraction

    def as_tuple(self):
        return tuple(getattr(self, op) for op in OPERATIONS)


@dataclass(frozen=True)
class CostReport:
    algorithm: str
    update: OpCounts
    no_update: OpCounts
    f_up: Fraction
    average: OpCounts


def _update_counts(variant, M, N, L, P):
    M, N, L, P = (Fraction(x) for x in (M, N, L, P))
    filt = 2 * N * (L - 1)
    if variant.proportionate:
        add = 6 * M + filt + M * (P + 1) / N
        mul = 6 * M + 3 * M / N + 2 * N * L + 1
        div = 1 + M / N
    else:
        add = 4 * M + filt + M * (P - 1) / N
        mul = 4 * M + M / N + 2 * N * L + 1
        div = Fraction(1)
    cmp = Fraction(0)
    if variant.set_membership:
        add += 1
        div += 1
        cmp += 1
    if variant.smoothed:
        add += 1
        mul += 2
        cmp += 1
    return OpCounts(add, mul, div, cmp)


def _no_update_counts(M, N, L, P):
    M, N, L, P = (Fraction(x) for x in (M, N, L, P))
    return OpCounts(
        2 * M + 2 * N * (L - 1) + M * (P - 1) / N,
        2 * M + M / N + 2 * N * L,
        Fraction(0),
        Fraction(0),
    )


def cost_model(algo, M, N, L, F_up=1.0):
    """Operation counts with and without an update, and their average.

    ``C_av = F_up C_up + (1 - F_up) C_nup`` per operation class. Fixed-step
    variants always update, so their no-update row equals the update row.
    """
    variant = Variant(getattr(algo, "variant", algo))
    if variant is Variant.NSAF:
        raise UnsupportedAlgorithmError("no closed-form cost row for NSAF")
    P = getattr(algo, "P", 2)
    if min(M, N, L, P) <= 0:
        raise ValueError("M, N, L and P must be positive")
    if not 0.0 <= F_up <= 1.0:
        raise ValueError("F_up must lie in [0, 1]")
    up = _update_counts(variant, M, N, L, P)
    nup = _no_update_counts(M, N, L, P) if variant.set_membership else up
    f = Fraction(F_up)
    avg = OpCounts(*(f * a + (1 - f) * b for a, b in zip(up.as_tuple(), nup.as_tuple())))
    name = getattr(algo, "label", variant.value)
    return CostReport(name, up, nup, f, avg)
