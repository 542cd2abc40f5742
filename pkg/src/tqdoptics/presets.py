"""Bundled sweep scenarios.

Each preset pins the probe/coupling working point of one standard
scenario plus the frozen calibration values (dot density and the slow
inter-dot decay rates). The density puts the magnetic local-field
response just past the Clausius-Mossotti pole so the negative-index band
exists, and the small gamma_31/gamma_41 keep the tunneling-split
structure sharper than the coupling scale, which is what produces the
three transparency windows (see README, "Calibration"). Everything else
comes straight from the measured heterostructure parameters.

fig2: pump-rate study baseline (T_a = 0.25, T_b = 0.60, pump 0.2).
fig3: stronger 2-3 tunneling working point (T_a = 0.24).
fig4: fig3 with the 3-4 tunneling raised to 0.65.
"""

from __future__ import annotations

# Frozen by the calibration run against the time-domain oracle
# (2026-08-09): density chosen inside the window where the fig3 curve
# shows exactly three transparency windows and both tunneling families
# deepen min Re n monotonically.
CALIBRATED_DENSITY = 3.0e15  # m^-3
CALIBRATED_GAMMA_31 = 0.1  # Gamma_10
CALIBRATED_GAMMA_41 = 0.1  # Gamma_10

_COMMON = {
    "rabi_e": 0.05,
    "pump_rate": 0.2,
    "tunneling_b": 0.60,
    "detuning_start": -3.0,
    "detuning_stop": 3.0,
    "steps": 601,
    "density_n": CALIBRATED_DENSITY,
    "gamma_31": CALIBRATED_GAMMA_31,
    "gamma_41": CALIBRATED_GAMMA_41,
}

PRESETS: dict[str, dict[str, float | int]] = {
    "fig2": {**_COMMON, "tunneling_a": 0.25},
    "fig3": {**_COMMON, "tunneling_a": 0.24},
    "fig4": {**_COMMON, "tunneling_a": 0.24, "tunneling_b": 0.65},
}

PRESET_NAMES = tuple(PRESETS)
