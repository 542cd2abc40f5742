"""Steady states of the dot-chain evolution: linear solve and time integration.

The linear path solves the trace-constrained 16x16 system directly. The
time-domain path composes the classic fourth-order one-step map of the
same linear flow and serves as the independent brute-force oracle; it is
built on :func:`tqdoptics.model.rhs_derivative_matrix`, not on
:func:`tqdoptics.model.build_liouvillian`, so the two routes share no
operator-assembly code.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NotSettledError, SingularSystemError, ToleranceNotMetError
from .model import (
    DIM,
    N_LEVELS,
    DensityMatrix,
    LiouvillianSystem,
    TqdParams,
    rhs_derivative_matrix,
)

DEFAULT_SOLVE_TOL = 1e-8
DEFAULT_STEP = 1e-3  # in 1/Gamma_10
DEFAULT_SETTLE_TOL = 1e-9  # in Gamma_10
DEFAULT_MAX_TIME = 1e4  # in 1/Gamma_10
CONDITION_LIMIT = 1e14
PSD_WARN_TOL = 1e-6


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady state plus the diagnostics that qualify it.

    ``residual_norm`` is the max-norm of the equations of motion at the
    returned state (plus any Hermitian symmetrization correction), always
    evaluated through the term-by-term path. ``condition_estimate`` is the
    condition number of the constrained matrix, or 0.0 when the state came
    from time integration and no matrix was factorized.
    """

    rho: DensityMatrix
    residual_norm: float
    condition_estimate: float


def steady_state_residual(params: TqdParams, rho: DensityMatrix) -> float:
    """Max-norm of d rho/dt at ``rho``; zero iff the state is stationary."""
    return float(np.abs(rhs_derivative_matrix(params, rho.matrix)).max())


def _monitor_positivity(rho: np.ndarray) -> None:
    smallest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if smallest < -PSD_WARN_TOL:
        # static message so repeated sweep points dedupe to one warning
        warnings.warn(
            "steady state has an eigenvalue below -1e-6; the phenomenological "
            "dissipator does not guarantee positivity",
            RuntimeWarning,
            stacklevel=3,
        )


def _finalize(params: TqdParams, raw: np.ndarray, condition: float) -> SteadyStateResult:
    sym = 0.5 * (raw + raw.conj().T)
    correction = float(np.abs(raw - sym).max())
    residual = float(np.abs(rhs_derivative_matrix(params, sym)).max()) + correction
    _monitor_positivity(sym)
    return SteadyStateResult(
        rho=DensityMatrix(sym),
        residual_norm=residual,
        condition_estimate=condition,
    )


def solve_steady_state(
    system: LiouvillianSystem, tol: float = DEFAULT_SOLVE_TOL
) -> SteadyStateResult:
    """Solve the trace-constrained linear system for the steady state.

    Raises :class:`SingularSystemError` for rank-deficient systems
    (degenerate parameter sets) and :class:`ToleranceNotMetError` when the
    independent residual exceeds ``tol``.
    """
    if not tol > 0.0:
        raise ToleranceNotMetError(f"tol must be > 0, got {tol!r}")
    condition = float(np.linalg.cond(system.matrix))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularSystemError(
            f"constrained system is rank deficient (condition {condition:.3e})"
        )
    try:
        vec = np.linalg.solve(system.matrix, system.rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    result = _finalize(system.params, vec.reshape(N_LEVELS, N_LEVELS), condition)
    if result.residual_norm > tol:
        raise ToleranceNotMetError(
            f"steady-state residual {result.residual_norm:.3e} exceeds tol {tol:.3e}"
        )
    return result


def rhs_generator(params: TqdParams) -> np.ndarray:
    """16x16 matrix of the term-by-term derivative map on vectorized states.

    Built column by column from the action of the equations of motion on
    the matrix units, so it inherits independence from the operator
    assembly path.
    """
    gen = np.zeros((DIM, DIM), dtype=complex)
    basis = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    for col in range(DIM):
        basis.flat[col] = 1.0
        gen[:, col] = rhs_derivative_matrix(params, basis).reshape(DIM)
        basis.flat[col] = 0.0
    return gen


def _rk4_step_matrix(gen: np.ndarray, step: float) -> np.ndarray:
    """Stability polynomial I + H + H^2/2 + H^3/6 + H^4/24 with H = step*gen."""
    h = step * gen
    eye = np.eye(DIM, dtype=complex)
    acc = eye + h / 4.0
    acc = eye + (h / 3.0) @ acc
    acc = eye + (h / 2.0) @ acc
    return eye + h @ acc


def evolve_to_steady_state(
    params: TqdParams,
    rho0: DensityMatrix,
    max_time: float = DEFAULT_MAX_TIME,
    step: float = DEFAULT_STEP,
    settle_tol: float = DEFAULT_SETTLE_TOL,
    chunk_time: float = 1.0,
) -> SteadyStateResult:
    """Integrate the equations of motion until the derivative norm settles.

    Classic fourth-order one-step integration of the linear flow; since
    the system is autonomous and linear, ``chunk_time`` worth of steps is
    composed into one matrix power and the settle criterion (max-norm of
    d rho/dt below ``settle_tol``) is checked per chunk. Raises
    :class:`NotSettledError` when ``max_time`` is reached first.
    """
    if not step > 0.0:
        raise NotSettledError(f"step must be > 0, got {step!r}")
    if not settle_tol > 0.0:
        raise NotSettledError(f"settle_tol must be > 0, got {settle_tol!r}")
    gen = rhs_generator(params)
    steps_per_chunk = max(1, int(round(chunk_time / step)))
    propagator = np.linalg.matrix_power(_rk4_step_matrix(gen, step), steps_per_chunk)

    vec = rho0.to_vector()
    elapsed = 0.0
    while True:
        residual = float(np.abs(gen @ vec).max())
        if residual < settle_tol:
            break
        if elapsed >= max_time:
            raise NotSettledError(
                f"derivative norm {residual:.3e} still above {settle_tol:.3e} "
                f"after t = {elapsed:.3g}/Gamma_10; raise max_time"
            )
        vec = propagator @ vec
        elapsed += steps_per_chunk * step
    return _finalize(params, vec.reshape(N_LEVELS, N_LEVELS), 0.0)
