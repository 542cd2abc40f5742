"""Domain types and equations of motion of the four-level triple-dot system.

Levels are numbered 1..4: |1> and |2> are the lower and upper conduction
states of the optically driven dot, |3> and |4> the excited conduction
states of the two neighbouring dots. Electron tunneling T_a couples 2-3,
T_b couples 3-4. An incoherent pump with rate Gamma recycles population
from |1> to |2>; the probe couples to the 1-2 transition through its
electric component (Rabi frequency Omega_e) and to 1-3 through its
magnetic component (Omega_b). All model rates are dimensionless multiples
of the reference rate Gamma_10 held by :class:`RateUnit`; time is measured
in 1/Gamma_10.

The ten independent equations of motion (four populations, six
coherences; the remaining six coherences follow by conjugation) are::

    d rho_11 = (g21+G) rho_22 + g31 rho_33 + g41 rho_44
               + i (Oe rho_21 - Oe* rho_12) - G rho_11
    d rho_22 = -(g21+G) rho_22 - i (Oe rho_21 - Oe* rho_12)
               + i (Ta* rho_32 - Ta rho_23) + G rho_11
    d rho_33 = -g31 rho_33 + i (Ta rho_23 - Ta* rho_32)
               - i (Tb rho_34 - Tb* rho_43)
    d rho_44 = -g41 rho_44 + i (Tb rho_34 - Tb* rho_43)
    d rho_12 = (i Dp - K21 - G) rho_12 - i Oe (rho_11 - rho_22) - i Ta rho_13
    d rho_13 = (i (Dp + w12) - K31 - G/2) rho_13 + i Ob rho_23
               - i (Ta* rho_12 + Tb rho_14)
    d rho_14 = (i (Dp + w12 + w23) - K41 - G/2) rho_14 + i Oe rho_24
               - i Tb* rho_13
    d rho_32 = -(i w23 + K32 + G/2) rho_32 - i Ta (rho_33 - rho_22)
               - i Ob rho_31 + i Tb* rho_42
    d rho_42 = -(i (w23 + w34) + K42 + G/2) rho_42
               - i (Ta rho_43 - Tb rho_32) - i Oe rho_41
    d rho_43 = -(i w34 + K43) rho_43 - i Tb (rho_44 - rho_33) - i Ta* rho_42

with G the pump rate, Dp the probe detuning, w_ij level spacings, g_i1 the
spontaneous emission rates and K_ij the total decoherence rates
(K_i1 = g_i1/2 + dephasing_i1, K_ij = (g_i1+g_j1)/2 + dephasing_ij).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidParameterError

N_LEVELS = 4
DIM = N_LEVELS * N_LEVELS

# Coherence pairs whose equations are written explicitly; the transposed
# pairs evolve by complex conjugation.
EXPLICIT_COHERENCES = ((1, 2), (1, 3), (1, 4), (3, 2), (4, 2), (4, 3))

# Decoherence pairs that accept a dephasing contribution.
DEPHASING_PAIRS = ((2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (4, 3))

REFERENCE_RATE_HZ = 1.6e9  # Gamma_10 for the GaAs/AlGaAs stack, gamma = 1 GHz


def _index(i: int, j: int) -> int:
    """Row-major position of rho_ij (1-based levels) in the vectorized state."""
    return N_LEVELS * (i - 1) + (j - 1)


def _require_finite(name: str, value: complex) -> None:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def _require_nonnegative(name: str, value: float) -> None:
    if not math.isfinite(value) or value < 0.0:
        raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class RateUnit:
    """Reference rate Gamma_10 that scales every dimensionless model rate.

    ``gamma_ref`` is an angular frequency in s^-1. The default treats the
    1.6 GHz reference as already angular; :meth:`from_convention` builds
    the alternative where 1 GHz is an ordinary frequency.
    """

    gamma_ref: float = REFERENCE_RATE_HZ

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma_ref) and self.gamma_ref > 0.0):
            raise InvalidParameterError(
                f"gamma_ref must be finite and > 0, got {self.gamma_ref!r}"
            )

    @classmethod
    def from_convention(cls, convention: str) -> "RateUnit":
        if convention == "angular":
            return cls(REFERENCE_RATE_HZ)
        if convention == "ordinary":
            return cls(2.0 * math.pi * REFERENCE_RATE_HZ)
        raise InvalidParameterError(
            f"angular_frequency_convention must be 'angular' or 'ordinary', got {convention!r}"
        )

    def to_absolute(self, rate: complex) -> complex:
        """Convert a rate in Gamma_10 units to an angular frequency in s^-1."""
        return rate * self.gamma_ref


@dataclass(frozen=True)
class TqdParams:
    """All rates, couplings and detunings for one evaluation point.

    Every entry is dimensionless (units of Gamma_10). ``rabi_b = None``
    means "derive from rabi_e by the plane-wave ratio when the response is
    evaluated"; the dynamics require a concrete number, so resolve it
    first (see :func:`tqdoptics.response.resolve_rabi_b`).

    ``dephasing`` maps ordered level pairs (upper, lower) from
    :data:`DEPHASING_PAIRS` to pure-dephasing rates. ``decoherence_overrides``
    replaces the computed total decoherence rate K_ij for a pair outright,
    which keeps the rate map injectable for sensitivity checks.
    """

    pump_rate: float = 0.0
    tunneling_a: complex = 0.0
    tunneling_b: complex = 0.0
    rabi_e: complex = 0.0
    rabi_b: complex | None = None
    detuning_p: float = 0.0
    omega_12: float = 0.0
    omega_23: float = 0.0
    omega_34: float = 0.0
    gamma_21: float = 1.0
    gamma_31: float = 1.0
    gamma_41: float = 1.0
    dephasing: Mapping[tuple[int, int], float] = field(default_factory=dict)
    decoherence_overrides: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _require_nonnegative("pump_rate", self.pump_rate)
        for name in ("gamma_21", "gamma_31", "gamma_41"):
            _require_nonnegative(name, getattr(self, name))
        for name in ("detuning_p", "omega_12", "omega_23", "omega_34"):
            _require_finite(name, complex(getattr(self, name)))
        for name in ("tunneling_a", "tunneling_b", "rabi_e"):
            _require_finite(name, complex(getattr(self, name)))
        if self.rabi_b is not None:
            _require_finite("rabi_b", complex(self.rabi_b))
        object.__setattr__(self, "dephasing", dict(self.dephasing))
        object.__setattr__(
            self, "decoherence_overrides", dict(self.decoherence_overrides)
        )
        for pair, rate in self.dephasing.items():
            if pair not in DEPHASING_PAIRS:
                raise InvalidParameterError(f"unknown dephasing pair {pair!r}")
            _require_nonnegative(f"dephasing{pair}", rate)
        for pair, rate in self.decoherence_overrides.items():
            if pair not in DEPHASING_PAIRS:
                raise InvalidParameterError(f"unknown decoherence pair {pair!r}")
            _require_nonnegative(f"decoherence_overrides{pair}", rate)

    def spontaneous_rate(self, level: int) -> float:
        """Emission rate g_i1 from level i (2..4) to the ground level."""
        try:
            return {2: self.gamma_21, 3: self.gamma_31, 4: self.gamma_41}[level]
        except KeyError:
            raise InvalidParameterError(f"no spontaneous rate for level {level}") from None

    def total_decoherence(self, i: int, j: int) -> float:
        """Total decoherence rate K_ij of the (i, j) coherence, i > j.

        K_i1 = g_i1/2 + dephasing_i1 and K_ij = (g_i1 + g_j1)/2 +
        dephasing_ij for i, j >= 2. An entry in ``decoherence_overrides``
        wins outright.
        """
        pair = (i, j)
        if pair not in DEPHASING_PAIRS:
            raise InvalidParameterError(f"no decoherence rate for pair {pair!r}")
        override = self.decoherence_overrides.get(pair)
        if override is not None:
            return override
        dephase = self.dephasing.get(pair, 0.0)
        if j == 1:
            return 0.5 * self.spontaneous_rate(i) + dephase
        return 0.5 * (self.spontaneous_rate(i) + self.spontaneous_rate(j)) + dephase


@dataclass(frozen=True)
class MaterialConstants:
    """Material and fundamental constants entering the response maps.

    ``density_n`` is the volume number density of dots (m^-3). The default
    converts the quoted sheet density through a 10 nm effective layer; it
    is the primary calibration knob of the whole pipeline (see README).
    """

    density_n: float = 3.7e23  # m^-3 = 3.7e15 m^-2 sheet density / 10 nm
    dipole_e: float = 2.335 * 1.602e-19  # |d_21|, C m
    dipole_m: float = 7.0e-23  # |mu_13|, C m^2 s^-1
    vacuum_permittivity: float = 8.8541878128e-12  # F/m
    vacuum_permeability: float = 1.25663706212e-6  # N/A^2
    hbar: float = 1.054571817e-34  # J s

    def __post_init__(self) -> None:
        for name in (
            "density_n",
            "dipole_e",
            "dipole_m",
            "vacuum_permittivity",
            "vacuum_permeability",
            "hbar",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidParameterError(
                    f"{name} must be finite and > 0, got {value!r}"
                )


SPEED_OF_LIGHT = 299792458.0  # m/s
SHEET_DENSITY_DEFAULT = 3.7e15  # m^-2
LAYER_THICKNESS_DEFAULT = 1.0e-8  # m


def volume_density(sheet_density: float, layer_thickness: float) -> float:
    """Volume dot density from a sheet density and effective layer thickness."""
    if not (math.isfinite(layer_thickness) and layer_thickness > 0.0):
        raise InvalidParameterError(
            f"layer_thickness must be finite and > 0, got {layer_thickness!r}"
        )
    if not (math.isfinite(sheet_density) and sheet_density > 0.0):
        raise InvalidParameterError(
            f"sheet_density must be finite and > 0, got {sheet_density!r}"
        )
    return sheet_density / layer_thickness


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """4x4 complex state of the dot chain, levels indexed 1..4.

    Construction does not enforce the state invariants (property tests feed
    deliberately non-Hermitian matrices); :meth:`validate` checks them.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex)
        if arr.shape != (N_LEVELS, N_LEVELS):
            raise InvalidParameterError(
                f"density matrix must be {N_LEVELS}x{N_LEVELS}, got {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def ground(cls) -> "DensityMatrix":
        arr = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
        arr[0, 0] = 1.0
        return cls(arr)

    @classmethod
    def from_populations(cls, populations) -> "DensityMatrix":
        pops = np.asarray(populations, dtype=float)
        if pops.shape != (N_LEVELS,):
            raise InvalidParameterError("need exactly four populations")
        return cls(np.diag(pops.astype(complex)))

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "DensityMatrix":
        return cls(np.asarray(vec, dtype=complex).reshape(N_LEVELS, N_LEVELS))

    def to_vector(self) -> np.ndarray:
        return self.matrix.reshape(DIM).copy()

    def population(self, level: int) -> float:
        return float(self.matrix[level - 1, level - 1].real)

    def coherence(self, i: int, j: int) -> complex:
        return complex(self.matrix[i - 1, j - 1])

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def smallest_eigenvalue(self) -> float:
        sym = 0.5 * (self.matrix + self.matrix.conj().T)
        return float(np.linalg.eigvalsh(sym).min())

    def validate(self, tol: float = 1e-9) -> None:
        """Check Hermiticity, unit trace and real diagonal to ``tol``."""
        if self.hermiticity_defect() > tol:
            raise InvalidParameterError(
                f"density matrix not Hermitian within {tol}: defect {self.hermiticity_defect():.3e}"
            )
        if abs(self.trace - 1.0) > tol:
            raise InvalidParameterError(
                f"density matrix trace {self.trace} not 1 within {tol}"
            )
        diag_imag = float(np.abs(np.diag(self.matrix).imag).max())
        if diag_imag > tol:
            raise InvalidParameterError(
                f"diagonal imaginary parts up to {diag_imag:.3e} exceed {tol}"
            )


@dataclass(frozen=True, eq=False)
class LiouvillianSystem:
    """Linear system whose solution is the steady state.

    ``generator`` is the raw 16x16 operator L with d vec(rho)/dt =
    L vec(rho) (row-major vectorization). ``matrix`` is L with
    ``constraint_row`` replaced by the unit-trace row; ``rhs`` is zero
    except for a one in that row.
    """

    generator: np.ndarray
    matrix: np.ndarray
    constraint_row: int
    rhs: np.ndarray
    params: TqdParams

    def __post_init__(self) -> None:
        for name in ("generator", "matrix"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (DIM, DIM):
                raise InvalidParameterError(f"{name} must be {DIM}x{DIM}")


def _resolved_rabi_b(params: TqdParams) -> complex:
    if params.rabi_b is None:
        raise InvalidParameterError(
            "rabi_b is unresolved; fill it explicitly or via response.resolve_rabi_b"
        )
    return complex(params.rabi_b)


def build_liouvillian(params: TqdParams) -> LiouvillianSystem:
    """Assemble the 16x16 evolution operator for ``params``.

    Coefficients of the ten explicit equations are placed directly; the
    six conjugate coherence rows follow from them by L[(j,i),(l,k)] =
    conj(L[(i,j),(k,l)]). The rho_11 row of the returned ``matrix`` is
    replaced by the trace constraint.
    """
    gamma = params.pump_rate
    omega_e = complex(params.rabi_e)
    omega_b = _resolved_rabi_b(params)
    t_a = complex(params.tunneling_a)
    t_b = complex(params.tunneling_b)
    g21, g31, g41 = params.gamma_21, params.gamma_31, params.gamma_41
    delta_p = params.detuning_p
    w12, w23, w34 = params.omega_12, params.omega_23, params.omega_34
    k21 = params.total_decoherence(2, 1)
    k31 = params.total_decoherence(3, 1)
    k41 = params.total_decoherence(4, 1)
    k32 = params.total_decoherence(3, 2)
    k42 = params.total_decoherence(4, 2)
    k43 = params.total_decoherence(4, 3)

    gen = np.zeros((DIM, DIM), dtype=complex)

    def put(row: tuple[int, int], col: tuple[int, int], value: complex) -> None:
        gen[_index(*row), _index(*col)] += value

    # populations
    put((1, 1), (2, 2), g21 + gamma)
    put((1, 1), (3, 3), g31)
    put((1, 1), (4, 4), g41)
    put((1, 1), (2, 1), 1j * omega_e)
    put((1, 1), (1, 2), -1j * omega_e.conjugate())
    put((1, 1), (1, 1), -gamma)

    put((2, 2), (2, 2), -(g21 + gamma))
    put((2, 2), (2, 1), -1j * omega_e)
    put((2, 2), (1, 2), 1j * omega_e.conjugate())
    put((2, 2), (3, 2), 1j * t_a.conjugate())
    put((2, 2), (2, 3), -1j * t_a)
    put((2, 2), (1, 1), gamma)

    put((3, 3), (3, 3), -g31)
    put((3, 3), (2, 3), 1j * t_a)
    put((3, 3), (3, 2), -1j * t_a.conjugate())
    put((3, 3), (3, 4), -1j * t_b)
    put((3, 3), (4, 3), 1j * t_b.conjugate())

    put((4, 4), (4, 4), -g41)
    put((4, 4), (3, 4), 1j * t_b)
    put((4, 4), (4, 3), -1j * t_b.conjugate())

    # explicit coherences
    put((1, 2), (1, 2), 1j * delta_p - k21 - gamma)
    put((1, 2), (1, 1), -1j * omega_e)
    put((1, 2), (2, 2), 1j * omega_e)
    put((1, 2), (1, 3), -1j * t_a)

    put((1, 3), (1, 3), 1j * (delta_p + w12) - k31 - 0.5 * gamma)
    put((1, 3), (2, 3), 1j * omega_b)
    put((1, 3), (1, 2), -1j * t_a.conjugate())
    put((1, 3), (1, 4), -1j * t_b)

    put((1, 4), (1, 4), 1j * (delta_p + w12 + w23) - k41 - 0.5 * gamma)
    put((1, 4), (2, 4), 1j * omega_e)
    put((1, 4), (1, 3), -1j * t_b.conjugate())

    put((3, 2), (3, 2), -(1j * w23 + k32 + 0.5 * gamma))
    put((3, 2), (3, 3), -1j * t_a)
    put((3, 2), (2, 2), 1j * t_a)
    put((3, 2), (3, 1), -1j * omega_b)
    put((3, 2), (4, 2), 1j * t_b.conjugate())

    put((4, 2), (4, 2), -(1j * (w23 + w34) + k42 + 0.5 * gamma))
    put((4, 2), (4, 3), -1j * t_a)
    put((4, 2), (3, 2), 1j * t_b)
    put((4, 2), (4, 1), -1j * omega_e)

    put((4, 3), (4, 3), -(1j * w34 + k43))
    put((4, 3), (4, 4), -1j * t_b)
    put((4, 3), (3, 3), 1j * t_b)
    put((4, 3), (4, 2), -1j * t_a.conjugate())

    # conjugate coherence rows
    for (a, b) in EXPLICIT_COHERENCES:
        src = _index(a, b)
        dst = _index(b, a)
        for c in range(1, N_LEVELS + 1):
            for d in range(1, N_LEVELS + 1):
                gen[dst, _index(d, c)] = gen[src, _index(c, d)].conjugate()

    constraint_row = _index(1, 1)
    matrix = gen.copy()
    matrix[constraint_row, :] = 0.0
    for level in range(1, N_LEVELS + 1):
        matrix[constraint_row, _index(level, level)] = 1.0
    rhs = np.zeros(DIM, dtype=complex)
    rhs[constraint_row] = 1.0

    gen.setflags(write=False)
    matrix.setflags(write=False)
    rhs.setflags(write=False)
    return LiouvillianSystem(
        generator=gen,
        matrix=matrix,
        constraint_row=constraint_row,
        rhs=rhs,
        params=params,
    )


def _explicit_derivatives(params: TqdParams, r: np.ndarray) -> dict[tuple[int, int], complex]:
    """Evaluate the ten explicit equations term by term on matrix ``r``.

    ``r`` is indexed 0-based; entries are read exactly as the equations
    are written, so the map is complex-linear in the entries of ``r``.
    """
    gamma = params.pump_rate
    omega_e = complex(params.rabi_e)
    omega_b = _resolved_rabi_b(params)
    t_a = complex(params.tunneling_a)
    t_b = complex(params.tunneling_b)
    g21, g31, g41 = params.gamma_21, params.gamma_31, params.gamma_41
    delta_p = params.detuning_p
    w12, w23, w34 = params.omega_12, params.omega_23, params.omega_34

    def rho(i: int, j: int) -> complex:
        return r[i - 1, j - 1]

    out: dict[tuple[int, int], complex] = {}
    out[(1, 1)] = (
        (g21 + gamma) * rho(2, 2)
        + g31 * rho(3, 3)
        + g41 * rho(4, 4)
        + 1j * (omega_e * rho(2, 1) - omega_e.conjugate() * rho(1, 2))
        - gamma * rho(1, 1)
    )
    out[(2, 2)] = (
        -(g21 + gamma) * rho(2, 2)
        - 1j * (omega_e * rho(2, 1) - omega_e.conjugate() * rho(1, 2))
        + 1j * (t_a.conjugate() * rho(3, 2) - t_a * rho(2, 3))
        + gamma * rho(1, 1)
    )
    out[(3, 3)] = (
        -g31 * rho(3, 3)
        + 1j * (t_a * rho(2, 3) - t_a.conjugate() * rho(3, 2))
        - 1j * (t_b * rho(3, 4) - t_b.conjugate() * rho(4, 3))
    )
    out[(4, 4)] = -g41 * rho(4, 4) + 1j * (t_b * rho(3, 4) - t_b.conjugate() * rho(4, 3))
    out[(1, 2)] = (
        (1j * delta_p - params.total_decoherence(2, 1) - gamma) * rho(1, 2)
        - 1j * omega_e * (rho(1, 1) - rho(2, 2))
        - 1j * t_a * rho(1, 3)
    )
    out[(1, 3)] = (
        (1j * (delta_p + w12) - params.total_decoherence(3, 1) - 0.5 * gamma) * rho(1, 3)
        + 1j * omega_b * rho(2, 3)
        - 1j * (t_a.conjugate() * rho(1, 2) + t_b * rho(1, 4))
    )
    out[(1, 4)] = (
        (1j * (delta_p + w12 + w23) - params.total_decoherence(4, 1) - 0.5 * gamma)
        * rho(1, 4)
        + 1j * omega_e * rho(2, 4)
        - 1j * t_b.conjugate() * rho(1, 3)
    )
    out[(3, 2)] = (
        -(1j * w23 + params.total_decoherence(3, 2) + 0.5 * gamma) * rho(3, 2)
        - 1j * t_a * (rho(3, 3) - rho(2, 2))
        - 1j * omega_b * rho(3, 1)
        + 1j * t_b.conjugate() * rho(4, 2)
    )
    out[(4, 2)] = (
        -(1j * (w23 + w34) + params.total_decoherence(4, 2) + 0.5 * gamma) * rho(4, 2)
        - 1j * (t_a * rho(4, 3) - t_b * rho(3, 2))
        - 1j * omega_e * rho(4, 1)
    )
    out[(4, 3)] = (
        -(1j * w34 + params.total_decoherence(4, 3)) * rho(4, 3)
        - 1j * t_b * (rho(4, 4) - rho(3, 3))
        - 1j * t_a.conjugate() * rho(4, 2)
    )
    return out


def rhs_derivative_matrix(params: TqdParams, r: np.ndarray) -> np.ndarray:
    """d rho/dt for a raw 4x4 array, by direct term-by-term evaluation.

    Independent of :func:`build_liouvillian`: the explicit equations are
    evaluated on ``r``, and the conjugate coherences are the conjugated
    explicit equations evaluated on ``r``'s adjoint, which keeps the map
    complex-linear for arbitrary (not necessarily Hermitian) input.
    """
    r = np.asarray(r, dtype=complex)
    direct = _explicit_derivatives(params, r)
    adjoint = _explicit_derivatives(params, r.conj().T)
    out = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    for level in range(1, N_LEVELS + 1):
        out[level - 1, level - 1] = direct[(level, level)]
    for (a, b) in EXPLICIT_COHERENCES:
        out[a - 1, b - 1] = direct[(a, b)]
        out[b - 1, a - 1] = adjoint[(a, b)].conjugate()
    return out


def rhs_derivative(params: TqdParams, rho: DensityMatrix) -> DensityMatrix:
    """d rho/dt of the equations of motion, as a :class:`DensityMatrix`."""
    return DensityMatrix(rhs_derivative_matrix(params, rho.matrix))
