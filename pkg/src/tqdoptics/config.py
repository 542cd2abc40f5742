"""Run configuration: the line-oriented key = value document and presets.

A config document is UTF-8, one ``key = value`` per line, ``#`` starts a
comment. Resolution order is defaults, then preset expansion, then file
keys, then command-line ``--set`` overrides; the provenance of every key
is recorded for the run log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .analysis import SweepAxis, SweepSpec
from .errors import InvalidParameterError, ParseError, RangeError, UnknownKeyError
from .model import (
    LAYER_THICKNESS_DEFAULT,
    REFERENCE_RATE_HZ,
    SHEET_DENSITY_DEFAULT,
    MaterialConstants,
    RateUnit,
    TqdParams,
    volume_density,
)
from .presets import PRESETS

DEPHASING_KEYS = {
    "dephasing_21": (2, 1),
    "dephasing_31": (3, 1),
    "dephasing_41": (4, 1),
    "dephasing_32": (3, 2),
    "dephasing_42": (4, 2),
    "dephasing_43": (4, 3),
}

_FLOAT_KEYS = (
    "pump_rate",
    "tunneling_a",
    "tunneling_b",
    "rabi_e",
    "rabi_b",
    "detuning_start",
    "detuning_stop",
    "density_n",
    "layer_thickness",
    "gamma_21",
    "gamma_31",
    "gamma_41",
    "abs_tol",
    *DEPHASING_KEYS,
)

CONFIG_KEYS = (
    "preset",
    *_FLOAT_KEYS,
    "steps",
    "angular_frequency_convention",
    "output",
    "format",
)

DEFAULTS: dict[str, object] = {
    "preset": None,
    "pump_rate": 0.2,
    "tunneling_a": 0.25,
    "tunneling_b": 0.60,
    "rabi_e": 0.05,
    "rabi_b": None,
    "detuning_start": -3.0,
    "detuning_stop": 3.0,
    "steps": 601,
    "density_n": None,  # derived from layer_thickness when unset
    "layer_thickness": LAYER_THICKNESS_DEFAULT,
    "gamma_21": 1.0,
    "gamma_31": 1.0,
    "gamma_41": 1.0,
    **{key: 0.0 for key in DEPHASING_KEYS},
    "angular_frequency_convention": "angular",
    "abs_tol": None,
    "output": None,
    "format": "csv",
}

OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run description."""

    sweep: SweepSpec
    output_path: Path
    output_format: str
    preset: str | None
    abs_tol: float | None
    provenance: Mapping[str, str] = field(default_factory=dict, compare=False)

    @property
    def params(self) -> TqdParams:
        return self.sweep.base

    @property
    def consts(self) -> MaterialConstants:
        return self.sweep.consts

    @property
    def rate_unit(self) -> RateUnit:
        return self.sweep.rate_unit


def _typed(key: str, raw: str, where: str, line_no: int | None = None) -> object:
    """Convert one raw value; malformed text in a document is a ParseError,
    values outside their documented range are a RangeError."""

    def malformed(reason: str) -> ConfigError:
        if line_no is not None:
            return ParseError(line_no, reason)
        return RangeError(f"{where}: {reason}")

    if key == "preset":
        if raw not in PRESETS:
            raise RangeError(
                f"{where}: preset must be one of {sorted(PRESETS)}, got {raw!r}"
            )
        return raw
    if key == "steps":
        try:
            return int(raw)
        except ValueError:
            raise malformed(f"steps must be an integer, got {raw!r}") from None
    if key == "angular_frequency_convention":
        if raw not in ("angular", "ordinary"):
            raise RangeError(
                f"{where}: angular_frequency_convention must be 'angular' or "
                f"'ordinary', got {raw!r}"
            )
        return raw
    if key == "format":
        if raw not in OUTPUT_FORMATS:
            raise RangeError(f"{where}: format must be csv or json, got {raw!r}")
        return raw
    if key == "output":
        if not raw:
            raise RangeError(f"{where}: output path must not be empty")
        return raw
    try:
        value = float(raw)
    except ValueError:
        raise malformed(f"{key} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise RangeError(f"{where}: {key} must be finite, got {raw!r}")
    return value


def parse_document(text: str) -> dict[str, tuple[object, int]]:
    """Parse a config document into typed values keyed by config key."""
    values: dict[str, tuple[object, int]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, raw = stripped.partition("=")
        if not sep:
            raise ParseError(line_no, f"expected 'key = value', got {stripped!r}")
        key = key.strip()
        raw = raw.strip()
        if not key:
            raise ParseError(line_no, "empty key")
        if key not in CONFIG_KEYS:
            raise UnknownKeyError(line_no, key)
        if key in values:
            raise ParseError(line_no, f"duplicate key {key!r}")
        if not raw:
            raise ParseError(line_no, f"empty value for {key!r}")
        values[key] = (_typed(key, raw, f"line {line_no}"), line_no)
    return values


def _build(values: dict[str, object], provenance: dict[str, str]) -> RunConfig:
    try:
        rate_unit = RateUnit.from_convention(values["angular_frequency_convention"])
        dephasing = {pair: float(values[key]) for key, pair in DEPHASING_KEYS.items()}
        params = TqdParams(
            pump_rate=float(values["pump_rate"]),
            tunneling_a=float(values["tunneling_a"]),
            tunneling_b=float(values["tunneling_b"]),
            rabi_e=float(values["rabi_e"]),
            rabi_b=None if values["rabi_b"] is None else float(values["rabi_b"]),
            detuning_p=0.0,
            gamma_21=float(values["gamma_21"]),
            gamma_31=float(values["gamma_31"]),
            gamma_41=float(values["gamma_41"]),
            dephasing=dephasing,
        )
        if values["density_n"] is not None:
            density = float(values["density_n"])
            if density <= 0.0:
                raise InvalidParameterError("density_n must be > 0")
        else:
            density = volume_density(
                SHEET_DENSITY_DEFAULT, float(values["layer_thickness"])
            )
        consts = MaterialConstants(density_n=density)
        sweep = SweepSpec(
            axis=SweepAxis.DETUNING_P,
            start=float(values["detuning_start"]),
            stop=float(values["detuning_stop"]),
            steps=int(values["steps"]),
            base=params,
            consts=consts,
            rate_unit=rate_unit,
        )
    except InvalidParameterError as exc:
        raise RangeError(str(exc)) from exc

    abs_tol = values["abs_tol"]
    if abs_tol is not None:
        abs_tol = float(abs_tol)
        if abs_tol <= 0.0:
            raise RangeError(f"abs_tol must be > 0, got {abs_tol}")
    output_format = str(values["format"])
    output = values["output"]
    output_path = Path(output) if output is not None else Path(f"response.{output_format}")
    return RunConfig(
        sweep=sweep,
        output_path=output_path,
        output_format=output_format,
        preset=values["preset"],
        abs_tol=abs_tol,
        provenance=dict(provenance),
    )


def resolve(
    file_values: Mapping[str, tuple[object, int]] | None = None,
    cli_preset: str | None = None,
    cli_sets: Mapping[str, str] | None = None,
    cli_output: str | None = None,
    cli_format: str | None = None,
) -> RunConfig:
    """Layer defaults, preset, file keys and CLI overrides into a RunConfig."""
    values = dict(DEFAULTS)
    provenance = {key: "default" for key in values}

    file_values = dict(file_values or {})
    preset_name = None
    if "preset" in file_values:
        preset_name = file_values["preset"][0]
    if cli_preset is not None:
        preset_name = _typed("preset", cli_preset, "--preset")
    if preset_name is not None:
        values["preset"] = preset_name
        provenance["preset"] = "preset"
        for key, value in PRESETS[preset_name].items():
            values[key] = value
            provenance[key] = "preset"

    for key, (value, _line) in file_values.items():
        if key == "preset":
            continue
        values[key] = value
        provenance[key] = "file"

    for key, raw in (cli_sets or {}).items():
        if key == "preset":
            raise RangeError("--set preset=... is not supported; use --preset")
        if key not in CONFIG_KEYS:
            raise RangeError(f"--set: unknown key {key!r}")
        values[key] = _typed(key, raw, "--set")
        provenance[key] = "override"
    if cli_output is not None:
        values["output"] = _typed("output", cli_output, "--output")
        provenance["output"] = "override"
    if cli_format is not None:
        values["format"] = _typed("format", cli_format, "--format")
        provenance["format"] = "override"

    return _build(values, provenance)


def load_config(text: str) -> RunConfig:
    """Resolve a config document into a RunConfig with all defaults filled."""
    return resolve(file_values=parse_document(text))


def _render_float(value: object) -> str:
    number = complex(value)
    if number.imag != 0.0:
        raise InvalidParameterError("cannot render a complex value to config text")
    return repr(float(number.real))


def render_config(config: RunConfig) -> str:
    """Config document that reproduces ``config`` through load_config."""
    params = config.params
    lines: list[str] = []
    if config.preset is not None:
        lines.append(f"preset = {config.preset}")
    lines.append(f"pump_rate = {_render_float(params.pump_rate)}")
    lines.append(f"tunneling_a = {_render_float(params.tunneling_a)}")
    lines.append(f"tunneling_b = {_render_float(params.tunneling_b)}")
    lines.append(f"rabi_e = {_render_float(params.rabi_e)}")
    if params.rabi_b is not None:
        lines.append(f"rabi_b = {_render_float(params.rabi_b)}")
    lines.append(f"detuning_start = {_render_float(config.sweep.start)}")
    lines.append(f"detuning_stop = {_render_float(config.sweep.stop)}")
    lines.append(f"steps = {config.sweep.steps}")
    lines.append(f"density_n = {_render_float(config.consts.density_n)}")
    lines.append(f"gamma_21 = {_render_float(params.gamma_21)}")
    lines.append(f"gamma_31 = {_render_float(params.gamma_31)}")
    lines.append(f"gamma_41 = {_render_float(params.gamma_41)}")
    for key, pair in DEPHASING_KEYS.items():
        lines.append(f"{key} = {_render_float(params.dephasing.get(pair, 0.0))}")
    convention = (
        "angular" if config.rate_unit.gamma_ref == REFERENCE_RATE_HZ else "ordinary"
    )
    lines.append(f"angular_frequency_convention = {convention}")
    if config.abs_tol is not None:
        lines.append(f"abs_tol = {_render_float(config.abs_tol)}")
    lines.append(f"output = {config.output_path}")
    lines.append(f"format = {config.output_format}")
    return "\n".join(lines) + "\n"
