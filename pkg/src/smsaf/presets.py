"""Named experiment bundles: the convergence sweeps, tracking runs and update-rate table.

Each preset expands to one or more ExperimentConfigs. Parameters that vary
an experiment-level quantity (the subband count in fig3a) produce one
experiment per value; everything else is a list of algorithms sharing a
scenario.
"""

from dataclasses import dataclass, replace

from .adaptive import AlgoConfig, Variant
from .harness import ExperimentConfig


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    experiments: tuple

    def with_overrides(self, **changes):
        return replace(self, experiments=tuple(replace(e, **changes) for e in self.experiments))


def _sm(**kw):
    return AlgoConfig(Variant.SM_INSAF, t=2.0, **kw)


def _fig3a():
    return tuple(
        ExperimentConfig(
            input_kind="ar1",
            path_kind="dispersive",
            N=N,
            algo_configs=(_sm(P=3, rho=1.0, name=f"SM-INSAF_N{N}"),),
            name=f"fig3a_N{N}",
        )
        for N in (2, 4, 8)
    )


def _fig3b():
    algos = tuple(_sm(P=3, rho=rho, name=f"SM-INSAF_rho{rho:g}") for rho in (0.2, 0.6, 1.0))
    return (ExperimentConfig(input_kind="ar1", path_kind="dispersive", N=8, algo_configs=algos, name="fig3b"),)


def _fig3c():
    algos = tuple(_sm(P=P, rho=1.0, name=f"SM-INSAF_P{P}") for P in (1, 2, 3))
    return (ExperimentConfig(input_kind="ar1", path_kind="dispersive", N=8, algo_configs=algos, name="fig3c"),)


_FIG4_ALGOS = (
    AlgoConfig(Variant.NSAF, mu=1.0),
    AlgoConfig(Variant.INSAF, mu=1.0, P=2, name="INSAF_mu1"),
    AlgoConfig(Variant.INSAF, mu=0.1, P=2, name="INSAF_mu0.1"),
    # SM-NSAF: no weight averaging and the wider bound sqrt(3 sigma^2 / N)
    AlgoConfig(Variant.SM_INSAF, P=1, t=3.0, name="SM-NSAF"),
    AlgoConfig(Variant.SM_INSAF, P=2, rho=1.0, t=2.0),
    AlgoConfig(Variant.SSM_INSAF, P=2, rho=1.0, t=0.75, kappa=1.0),
)

_FIG6_ALGOS = (
    # SM-IPNSAF: proportionate SM update without averaging, bound sqrt(2 sigma^2 / N)
    AlgoConfig(Variant.SM_IP_INSAF, P=1, t=2.0, lam=0.0, zeta=1e-4, name="SM-IPNSAF"),
    AlgoConfig(Variant.IP_INSAF, mu=1.0, P=2, lam=0.0, zeta=1e-4),
    AlgoConfig(Variant.SM_INSAF, P=2, rho=1.0, t=2.0),
    AlgoConfig(Variant.SSM_INSAF, P=2, rho=1.0, t=0.75, kappa=1.0),
    AlgoConfig(Variant.SM_IP_INSAF, P=2, rho=1.0, t=2.0, lam=0.0, zeta=1e-4),
    AlgoConfig(Variant.SSM_IP_INSAF, P=2, rho=1.0, t=0.75, kappa=1.0, lam=0.0, zeta=1e-4),
)


def _proposed(lam):
    return (
        AlgoConfig(Variant.SM_INSAF, P=2, rho=1.0, t=2.0),
        AlgoConfig(Variant.SSM_INSAF, P=2, rho=1.0, t=0.75, kappa=1.0),
        AlgoConfig(Variant.SM_IP_INSAF, P=2, rho=1.0, t=2.0, lam=lam, zeta=1e-4),
        AlgoConfig(Variant.SSM_IP_INSAF, P=2, rho=1.0, t=0.75, kappa=1.0, lam=lam, zeta=1e-4),
    )


def _tracking(path_kind, algos, name):
    return ExperimentConfig(
        input_kind="ar1",
        path_kind=path_kind,
        N=8,
        shift_at_half=True,
        shift_amount=12,
        algo_configs=algos,
        name=name,
    )


def _table3():
    fixed = (AlgoConfig(Variant.INSAF, mu=1.0, P=2), AlgoConfig(Variant.IP_INSAF, mu=1.0, P=2))
    sm, ssm, smip, ssmip = _proposed(0.0)
    return (
        _tracking("dispersive", (fixed[0], sm, ssm), "table3_dispersive"),
        _tracking("sparse", (fixed[1], smip, ssmip), "table3_sparse"),
    )


_BUILDERS = {
    "fig3a": ("SM-INSAF with N = 2, 4, 8 subbands (P=3, rho=1, t=2)", _fig3a),
    "fig3b": ("SM-INSAF with rho = 0.2, 0.6, 1 (P=3, N=8, t=2)", _fig3b),
    "fig3c": ("SM-INSAF with P = 1, 2, 3 (rho=1, N=8, t=2)", _fig3c),
    "fig4a": ("dispersive path, AR(1) input, non-proportionate family", lambda: (_tracking("dispersive", _FIG4_ALGOS, "fig4a"),)),
    "fig6a": ("sparse path, AR(1) input, proportionate family", lambda: (_tracking("sparse", _FIG6_ALGOS, "fig6a"),)),
    "fig7a": ("dispersive path, AR(1) input, proposed variants with lambda=-0.5", lambda: (_tracking("dispersive", _proposed(-0.5), "fig7a"),)),
    "table3": ("per-subband update rates, fixed-step and proposed variants", _table3),
}

PRESET_NAMES = tuple(_BUILDERS)


def get_preset(name):
    try:
        description, build = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}") from None
    return Preset(name, description, build())
