"""Steady-state optical response of a tunnel-coupled triple-quantum-dot medium.

The package solves the four-level density-matrix equations of the dot
chain for their steady state, maps the probe coherences to relative
permittivity, permeability and complex refractive index through the
Clausius-Mossotti relation, and sweeps detuning or couplings to locate
left-handed frequency bands and zero-absorption windows.
"""

from .analysis import (
    Interval,
    MonotonicityEntry,
    MonotonicityReport,
    ResponseCurve,
    SweepAxis,
    SweepSpec,
    WindowReport,
    default_abs_tol,
    detect_windows,
    monotonicity_report,
    sweep,
)
from .config import RunConfig, load_config, render_config
from .errors import (
    AllPointsFailedError,
    ConfigError,
    GridMismatchError,
    InvalidParameterError,
    NotSettledError,
    NumericalError,
    ParseError,
    PolarizationCatastropheError,
    RangeError,
    SingularSystemError,
    ToleranceNotMetError,
    TqdOpticsError,
    UnknownKeyError,
    ZeroProbeError,
)
from .model import (
    DensityMatrix,
    LiouvillianSystem,
    MaterialConstants,
    RateUnit,
    TqdParams,
    build_liouvillian,
    rhs_derivative,
    volume_density,
)
from .response import (
    ResponsePoint,
    clausius_mossotti,
    electric_polarizability,
    evaluate_response,
    magnetic_polarizability,
    plane_wave_rabi_b,
    principal_sqrt,
    refractive_index,
    resolve_rabi_b,
)
from .solver import (
    SteadyStateResult,
    evolve_to_steady_state,
    solve_steady_state,
    steady_state_residual,
)

__version__ = "0.1.0"

__all__ = [
    "AllPointsFailedError",
    "ConfigError",
    "DensityMatrix",
    "GridMismatchError",
    "Interval",
    "InvalidParameterError",
    "LiouvillianSystem",
    "MaterialConstants",
    "MonotonicityEntry",
    "MonotonicityReport",
    "NotSettledError",
    "NumericalError",
    "ParseError",
    "PolarizationCatastropheError",
    "RangeError",
    "RateUnit",
    "ResponseCurve",
    "ResponsePoint",
    "RunConfig",
    "SingularSystemError",
    "SteadyStateResult",
    "SweepAxis",
    "SweepSpec",
    "ToleranceNotMetError",
    "TqdOpticsError",
    "TqdParams",
    "UnknownKeyError",
    "WindowReport",
    "ZeroProbeError",
    "build_liouvillian",
    "clausius_mossotti",
    "default_abs_tol",
    "detect_windows",
    "electric_polarizability",
    "evaluate_response",
    "evolve_to_steady_state",
    "load_config",
    "magnetic_polarizability",
    "monotonicity_report",
    "plane_wave_rabi_b",
    "principal_sqrt",
    "refractive_index",
    "render_config",
    "resolve_rabi_b",
    "rhs_derivative",
    "solve_steady_state",
    "steady_state_residual",
    "sweep",
    "volume_density",
]
