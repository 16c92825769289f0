from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from smsaf.adaptive import AlgoConfig, Variant
from smsaf.costs import OPERATIONS, cost_model
from smsaf.errors import UnsupportedAlgorithmError


def table(variant, M, N, L, P):
    """Per-sample counts written out row by row from the complexity tables."""
    F = Fraction
    M, N, L, P = F(M), F(N), F(L), F(P)
    rows = {
        Variant.INSAF: (4 * M + 2 * N * (L - 1) + M * (P - 1) / N, 4 * M + M / N + 2 * N * L + 1, 1, 0),
        Variant.SM_INSAF: (4 * M + 2 * N * (L - 1) + M * (P - 1) / N + 1, 4 * M + M / N + 2 * N * L + 1, 2, 1),
        Variant.SSM_INSAF: (4 * M + 2 * N * (L - 1) + M * (P - 1) / N + 2, 4 * M + M / N + 2 * N * L + 3, 2, 2),
        Variant.IP_INSAF: (6 * M + 2 * N * (L - 1) + M * (P + 1) / N, 6 * M + 3 * M / N + 2 * N * L + 1, 1 + M / N, 0),
        Variant.SM_IP_INSAF: (6 * M + 2 * N * (L - 1) + M * (P + 1) / N + 1, 6 * M + 3 * M / N + 2 * N * L + 1, 2 + M / N, 1),
        Variant.SSM_IP_INSAF: (6 * M + 2 * N * (L - 1) + M * (P + 1) / N + 2, 6 * M + 3 * M / N + 2 * N * L + 3, 2 + M / N, 2),
    }
    no_update = (2 * M + 2 * N * (L - 1) + M * (P - 1) / N, 2 * M + M / N + 2 * N * L, 0, 0)
    return tuple(F(x) for x in rows[variant]), tuple(F(x) for x in no_update)


COSTED = [v for v in Variant if v is not Variant.NSAF]


def test_worked_examples():
    assert cost_model(AlgoConfig(Variant.SM_INSAF, P=2), 512, 8, 128, 0.3).update.multiplications == 4161
    assert cost_model(AlgoConfig(Variant.IP_INSAF, P=2), 512, 8, 128).update.divisions == 65


@pytest.mark.parametrize("variant", COSTED)
def test_rows_match_tables(variant):
    rep = cost_model(AlgoConfig(variant, P=2), 512, 8, 128, 0.295)
    up, nup = table(variant, 512, 8, 128, 2)
    assert rep.update.as_tuple() == up
    if variant.set_membership:
        assert rep.no_update.as_tuple() == nup
    else:
        assert rep.no_update == rep.update


@given(
    variant=st.sampled_from(COSTED),
    M=st.integers(1, 4096),
    N=st.integers(1, 64),
    L=st.integers(1, 1024),
    P=st.integers(1, 8),
    f=st.fractions(0, 1),
)
def test_average_identity_is_exact(variant, M, N, L, P, f):
    rep = cost_model(AlgoConfig(variant, P=P), M, N, L, f)
    up, _ = table(variant, M, N, L, P)
    assert rep.update.as_tuple() == up
    for op in OPERATIONS:
        a, b, c = getattr(rep.update, op), getattr(rep.no_update, op), getattr(rep.average, op)
        assert isinstance(c, Fraction)
        assert c == f * a + (1 - f) * b
        assert b <= a


def test_full_update_rate_gives_update_cost():
    rep = cost_model(AlgoConfig(Variant.SSM_IP_INSAF), 512, 8, 128, 1.0)
    assert rep.average == rep.update


def test_fractional_entries_stay_exact():
    rep = cost_model(AlgoConfig(Variant.SM_INSAF, P=2), 500, 8, 128, 1.0)
    assert rep.update.additions == Fraction(4 * 500 + 2 * 8 * 127) + Fraction(500, 8) + 1
    assert rep.update.additions.denominator == 2


def test_nsaf_and_bad_inputs_rejected():
    with pytest.raises(UnsupportedAlgorithmError):
        cost_model(AlgoConfig(Variant.NSAF), 512, 8, 128)
    with pytest.raises(ValueError):
        cost_model(AlgoConfig(), 0, 8, 128)
    with pytest.raises(ValueError):
        cost_model(AlgoConfig(), 512, 8, 128, 1.5)
