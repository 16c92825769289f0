"""Set-membership improved normalized subband adaptive filters for echo cancellation."""

from .adaptive import AlgoConfig, Variant, adapt_step, exact_update_oracle
from .costs import CostReport, cost_model
from .errors import (
    AudioFormatError,
    ConfigError,
    DesignInfeasibleError,
    DivergenceError,
    SignalLengthError,
    SingularMatrixError,
    UnsupportedAlgorithmError,
)
from .filterbank import build_analysis_bank, design_prototype
from .harness import ExperimentConfig, monte_carlo, nmsd, run_trial, update_rate_report

__version__ = "0.1.0"
