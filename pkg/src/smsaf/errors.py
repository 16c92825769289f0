class ConfigError(ValueError):
    """Invalid configuration value or malformed config file."""


class DesignInfeasibleError(ValueError):
    pass


class SignalLengthError(ValueError):
    pass


class AudioFormatError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class UnsupportedAlgorithmError(ValueError):
    pass


class DivergenceError(RuntimeError):
    """Raised when NMSD blows past the divergence threshold.

    ``reports`` is a list of ``DivergenceReport`` (one per diverged run).
    """

    def __init__(self, reports):
        self.reports = list(reports)
        lines = [str(r) for r in self.reports]
        super().__init__("divergence detected:\n  " + "\n  ".join(lines))
