"""Macroscopic optical response from steady-state coherences.

The 1-2 coherence feeds the electric polarizability, the 3-1 coherence
the magnetizability; both map to relative permittivity/permeability via
the Clausius-Mossotti relation, and the refractive index uses factorized
principal square roots so a double-negative medium automatically lands on
the negative-index branch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import PolarizationCatastropheError, ZeroProbeError
from .model import (
    SPEED_OF_LIGHT,
    MaterialConstants,
    RateUnit,
    TqdParams,
    build_liouvillian,
)
from .solver import DEFAULT_SOLVE_TOL, solve_steady_state

DEFAULT_POLE_GUARD = 1e-12


@dataclass(frozen=True)
class ResponsePoint:
    """Complex response of the medium at one probe detuning."""

    detuning_p: float
    alpha_e: complex
    alpha_m: complex
    eps_r: complex
    mu_r: complex
    n: complex


def plane_wave_rabi_b(rabi_e: complex, consts: MaterialConstants) -> complex:
    """Magnetic Rabi frequency of the probe wave carrying ``rabi_e``.

    For a plane wave B = E/c, so Omega_b/Omega_e = |mu_13| / (|d_21| c);
    the ratio is dimensionless and holds in Gamma_10 units too.
    """
    return rabi_e * consts.dipole_m / (consts.dipole_e * SPEED_OF_LIGHT)


def resolve_rabi_b(params: TqdParams, consts: MaterialConstants) -> TqdParams:
    """Fill an unset rabi_b from the plane-wave ratio; no-op otherwise."""
    if params.rabi_b is not None:
        return params
    return replace(params, rabi_b=plane_wave_rabi_b(params.rabi_e, consts))


def electric_polarizability(
    rho12: complex,
    consts: MaterialConstants,
    rabi_e: complex,
    rate_unit: RateUnit = RateUnit(),
) -> complex:
    """|d_21|^2 rho_12 / (eps0 hbar Omega_e), with Omega_e in absolute units.

    ``rabi_e`` is in Gamma_10 units and converted here through
    ``rate_unit``. Raises :class:`ZeroProbeError` for a vanishing probe.
    """
    if rabi_e == 0:
        raise ZeroProbeError("electric polarizability undefined for rabi_e = 0")
    omega_abs = rate_unit.to_absolute(complex(rabi_e))
    return (
        consts.dipole_e**2
        * complex(rho12)
        / (consts.vacuum_permittivity * consts.hbar * omega_abs)
    )


def magnetic_polarizability(
    rho31: complex,
    consts: MaterialConstants,
    rabi_b: complex,
    rate_unit: RateUnit = RateUnit(),
) -> complex:
    """mu0 |mu_13|^2 rho_31 / (hbar Omega_b), with Omega_b in absolute units."""
    if rabi_b == 0:
        raise ZeroProbeError("magnetic polarizability undefined for rabi_b = 0")
    omega_abs = rate_unit.to_absolute(complex(rabi_b))
    return (
        consts.vacuum_permeability
        * consts.dipole_m**2
        * complex(rho31)
        / (consts.hbar * omega_abs)
    )


def clausius_mossotti(
    alpha: complex, density_n: float, pole_guard: float = DEFAULT_POLE_GUARD
) -> complex:
    """(1 + 2 N alpha / 3) / (1 - N alpha / 3) with a guarded pole at N alpha = 3."""
    n_alpha = density_n * complex(alpha)
    denominator = 1.0 - n_alpha / 3.0
    if abs(denominator) <= pole_guard:
        raise PolarizationCatastropheError(
            f"local-field denominator {denominator!r} within {pole_guard} of the pole"
        )
    return (1.0 + 2.0 * n_alpha / 3.0) / denominator


def principal_sqrt(z: complex) -> complex:
    """Square root with argument in (-pi, pi] and half-angle in (-pi/2, pi/2].

    Values on the negative real axis (including imaginary part -0.0) are
    taken from the upper side of the cut.
    """
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return cmath.sqrt(z)


def refractive_index(eps_r: complex, mu_r: complex) -> complex:
    """n = sqrt(eps_r) sqrt(mu_r) with factorized principal roots.

    When both real parts are negative and both imaginary parts positive,
    each factor lies in the second quadrant and the product has Re n < 0.
    """
    return principal_sqrt(eps_r) * principal_sqrt(mu_r)


def evaluate_response(
    params: TqdParams,
    consts: MaterialConstants,
    rate_unit: RateUnit = RateUnit(),
    *,
    solve_tol: float = DEFAULT_SOLVE_TOL,
    pole_guard: float = DEFAULT_POLE_GUARD,
) -> ResponsePoint:
    """Full pipeline: steady state, polarizabilities, eps_r, mu_r and n.

    Pure function of its inputs; solver and pole errors propagate.
    """
    params = resolve_rabi_b(params, consts)
    result = solve_steady_state(build_liouvillian(params), solve_tol)
    rho12 = result.rho.coherence(1, 2)
    rho31 = result.rho.coherence(3, 1)
    # a coherence of exactly zero has zero polarizability for any probe,
    # including the probe-free limit of a fully decoupled system
    if rho12 == 0:
        alpha_e = 0j
    else:
        alpha_e = electric_polarizability(rho12, consts, params.rabi_e, rate_unit)
    if rho31 == 0:
        alpha_m = 0j
    else:
        alpha_m = magnetic_polarizability(rho31, consts, params.rabi_b, rate_unit)
    eps_r = clausius_mossotti(alpha_e, consts.density_n, pole_guard)
    mu_r = clausius_mossotti(alpha_m, consts.density_n, pole_guard)
    n = refractive_index(eps_r, mu_r)
    for name, value in (("eps_r", eps_r), ("mu_r", mu_r), ("n", n)):
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise PolarizationCatastropheError(f"{name} is not finite: {value!r}")
    return ResponsePoint(
        detuning_p=params.detuning_p,
        alpha_e=alpha_e,
        alpha_m=alpha_m,
        eps_r=eps_r,
        mu_r=mu_r,
        n=n,
    )
