"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``category`` token; the CLI
prints it on the diagnostic stream and maps the class to its exit code.
"""

from __future__ import annotations


class TqdOpticsError(Exception):
    """Base class for all package errors."""

    category = "error"


class InvalidParameterError(TqdOpticsError, ValueError):
    """A physical parameter violates its documented range or finiteness."""

    category = "invalid_parameter"


class NumericalError(TqdOpticsError):
    """Base class for solver, response and sweep failures (exit code 3)."""

    category = "numerical"


class SingularSystemError(NumericalError):
    """Constrained steady-state system is rank deficient (degenerate rates)."""

    category = "singular_system"


class ToleranceNotMetError(NumericalError):
    """Steady-state residual exceeds the requested tolerance."""

    category = "tolerance_not_met"


class NotSettledError(NumericalError):
    """Time integration reached max_time with the derivative norm still large."""

    category = "not_settled"


class ZeroProbeError(NumericalError):
    """A polarizability was requested with a vanishing probe Rabi frequency."""

    category = "zero_probe"


class PolarizationCatastropheError(NumericalError):
    """Clausius-Mossotti denominator fell within the pole guard of zero."""

    category = "polarization_catastrophe"


class AllPointsFailedError(NumericalError):
    """Every grid point of a sweep failed to evaluate."""

    category = "all_points_failed"


class GridMismatchError(TqdOpticsError, ValueError):
    """Curves passed to a family report do not share one detuning grid."""

    category = "grid_mismatch"


class ConfigError(TqdOpticsError):
    """Base class for configuration problems (exit code 2)."""

    category = "config"


class ParseError(ConfigError):
    """A config document line could not be parsed."""

    category = "config_parse"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class UnknownKeyError(ConfigError):
    """A config document used a key outside the documented key set."""

    category = "config_unknown_key"

    def __init__(self, line_no: int, key: str):
        super().__init__(f"line {line_no}: unknown key {key!r}")
        self.line_no = line_no
        self.key = key


class RangeError(ConfigError):
    """A config value violates the range invariants of its target field."""

    category = "config_range"
