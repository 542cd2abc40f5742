"""Command-line front end: config resolution, sweeps, reports, flat files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 oracle mismatch above tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .analysis import (
    ResponseCurve,
    WindowReport,
    default_abs_tol,
    detect_windows,
    monotonicity_report,
    sweep,
)
from .config import CONFIG_KEYS, RunConfig, parse_document, resolve
from .errors import ConfigError, NumericalError, RangeError, TqdOpticsError
from .model import DensityMatrix, build_liouvillian
from .presets import PRESET_NAMES
from .response import resolve_rabi_b
from .solver import evolve_to_steady_state, solve_steady_state

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ORACLE = 4

ORACLE_STRIDE = 50
ORACLE_TOL = 1e-6

CSV_HEADER = "delta_p,re_eps,im_eps,re_mu,im_mu,re_n,im_n"

FAMILY_KEYS = ("pump_rate", "tunneling_a", "tunneling_b")


def _fmt(value: float) -> str:
    return format(value, ".17g")


def render_csv(curve: ResponseCurve) -> str:
    """Deterministic CSV table of the curve; failed points render as nan."""
    lines = [CSV_HEADER]
    for x, point in zip(curve.grid, curve.points):
        if point is None:
            fields = [_fmt(float(x))] + ["nan"] * 6
        else:
            fields = [
                _fmt(float(x)),
                _fmt(point.eps_r.real),
                _fmt(point.eps_r.imag),
                _fmt(point.mu_r.real),
                _fmt(point.mu_r.imag),
                _fmt(point.n.real),
                _fmt(point.n.imag),
            ]
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def _complex_dict(z: complex) -> dict[str, float]:
    return {"re": z.real, "im": z.imag}


def _point_dict(x: float, point) -> dict | None:
    if point is None:
        return None
    return {
        "detuning_p": point.detuning_p,
        "axis_value": x,
        "alpha_e": _complex_dict(point.alpha_e),
        "alpha_m": _complex_dict(point.alpha_m),
        "eps_r": _complex_dict(point.eps_r),
        "mu_r": _complex_dict(point.mu_r),
        "n": _complex_dict(point.n),
    }


def window_report_dict(report: WindowReport) -> dict:
    def intervals(items) -> list[dict[str, float]]:
        return [{"lo": w.lo, "hi": w.hi, "center": w.center} for w in items]

    return {
        "left_handed_bands": intervals(report.left_handed_bands),
        "zero_absorption_windows": intervals(report.zero_absorption_windows),
        "windows_inside_lh": intervals(report.windows_inside_lh),
        "symmetry_defect": report.symmetry_defect,
        "abs_tol": report.abs_tol,
    }


def render_json(curve: ResponseCurve, report: WindowReport) -> str:
    payload = {
        "sweep": {
            "axis": curve.spec.axis.value,
            "start": curve.spec.start,
            "stop": curve.spec.stop,
            "steps": curve.spec.steps,
        },
        "points": [
            _point_dict(float(x), p) for x, p in zip(curve.grid, curve.points)
        ],
        "failures": [
            {"index": index, "category": category}
            for index, category in curve.failures
        ],
        "window_report": window_report_dict(report),
    }
    return json.dumps(payload, indent=2) + "\n"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _windows_sidecar(path: Path) -> Path:
    return path.with_name(path.stem + "_windows.json")


def write_outputs(config: RunConfig, curve: ResponseCurve, report: WindowReport) -> list[Path]:
    """Write the response table plus the window report; returns the paths."""
    written = []
    if config.output_format == "csv":
        _write_text(config.output_path, render_csv(curve))
        written.append(config.output_path)
        sidecar = _windows_sidecar(config.output_path)
        _write_text(sidecar, json.dumps(window_report_dict(report), indent=2) + "\n")
        written.append(sidecar)
    else:
        _write_text(config.output_path, render_json(curve, report))
        written.append(config.output_path)
    return written


def _oracle_deviation(config: RunConfig, curve: ResponseCurve) -> tuple[float, int]:
    """Max steady-state deviation between the two solver routes.

    Every ORACLE_STRIDE-th grid point is re-solved linearly and integrated
    in time; returns (max elementwise deviation, points checked).
    """
    worst = 0.0
    checked = 0
    for index in range(0, len(curve.grid), ORACLE_STRIDE):
        if curve.points[index] is None:
            continue
        params = resolve_rabi_b(
            config.sweep.params_at(float(curve.grid[index])), config.consts
        )
        direct = solve_steady_state(build_liouvillian(params))
        integrated = evolve_to_steady_state(params, DensityMatrix.ground())
        deviation = float(
            np.abs(direct.rho.matrix - integrated.rho.matrix).max()
        )
        worst = max(worst, deviation)
        checked += 1
    return worst, checked


def _non_default_provenance(config: RunConfig) -> str:
    marked = [
        f"{key}({source})"
        for key, source in config.provenance.items()
        if source != "default" and key in CONFIG_KEYS
    ]
    return ", ".join(sorted(marked)) if marked else "all defaults"


def print_summary(
    config: RunConfig,
    curve: ResponseCurve,
    report: WindowReport,
    oracle: tuple[float, int] | None,
) -> None:
    def centers(items) -> str:
        return (
            ", ".join(f"{w.center:+.4f}" for w in items) if items else "none"
        )

    re_n = curve.series(lambda p: p.n.real)
    min_index = int(np.nanargmin(re_n)) if not np.all(np.isnan(re_n)) else None
    print(f"config: {_non_default_provenance(config)}")
    print(
        f"sweep: {curve.spec.axis.value} in [{curve.spec.start:g}, "
        f"{curve.spec.stop:g}], {curve.spec.steps} points "
        f"({len(curve.failures)} failed)"
    )
    for index, category in curve.failures:
        print(f"  failed point {index} at {curve.grid[index]:+.4f}: {category}")
    bands = report.left_handed_bands
    print(
        f"left-handed bands ({len(bands)}): "
        + (
            "; ".join(f"[{b.lo:+.4f}, {b.hi:+.4f}]" for b in bands)
            if bands
            else "none"
        )
    )
    print(
        f"zero-absorption windows ({len(report.zero_absorption_windows)}) "
        f"at |Im n| < {report.abs_tol:.6g}: centers "
        f"{centers(report.zero_absorption_windows)}"
    )
    print(f"windows inside left-handed bands: {len(report.windows_inside_lh)}")
    print(f"symmetry defect: {report.symmetry_defect:.6g} Gamma_10")
    if min_index is not None:
        print(
            f"min Re n: {re_n[min_index]:.6g} at "
            f"{curve.spec.axis.value} = {curve.grid[min_index]:+.4f}"
        )
    if oracle is not None:
        deviation, checked = oracle
        print(
            f"oracle: max steady-state deviation {deviation:.3e} "
            f"over {checked} spot checks (tolerance {ORACLE_TOL:g})"
        )


def _execute(
    config: RunConfig, *, oracle: bool, summary_only: bool
) -> tuple[int, ResponseCurve]:
    curve = sweep(config.sweep)
    abs_tol = config.abs_tol if config.abs_tol is not None else default_abs_tol(curve)
    report = detect_windows(curve, abs_tol)
    oracle_result = _oracle_deviation(config, curve) if oracle else None
    if not summary_only:
        for path in write_outputs(config, curve, report):
            print(f"wrote {path}")
    print_summary(config, curve, report, oracle_result)
    if oracle_result is not None and oracle_result[0] > ORACLE_TOL:
        print(
            f"error: category=oracle_mismatch deviation {oracle_result[0]:.3e} "
            f"exceeds {ORACLE_TOL:g}",
            file=sys.stderr,
        )
        return EXIT_ORACLE, curve
    return EXIT_OK, curve


def run(
    config: RunConfig, *, oracle: bool = False, summary_only: bool = False
) -> int:
    """Execute one configured sweep; returns the process exit code."""
    status, _curve = _execute(config, oracle=oracle, summary_only=summary_only)
    return status


def _family_output_path(base: Path, key: str, value: float) -> Path:
    return base.with_name(f"{base.stem}_{key}_{value:g}{base.suffix}")


def run_family(
    config: RunConfig,
    key: str,
    values: list[float],
    *,
    oracle: bool = False,
    summary_only: bool = False,
) -> int:
    """Run one sweep per family value and emit a monotonicity report."""
    curves = []
    status = EXIT_OK
    for value in values:
        member = replace(
            config,
            sweep=replace(
                config.sweep, base=replace(config.sweep.base, **{key: value})
            ),
            output_path=_family_output_path(config.output_path, key, value),
        )
        print(f"--- {key} = {value:g} ---")
        member_status, curve = _execute(
            member, oracle=oracle, summary_only=summary_only
        )
        status = max(status, member_status)
        curves.append(curve)
    report = monotonicity_report(curves, values)
    print(f"--- family report over {key} ---")
    for entry in report.entries:
        print(
            f"{key} = {entry.parameter:g}: min Re n = {entry.min_re_n:.6g} "
            f"at detuning_p = {entry.at_detuning:+.4f}"
        )
    print(f"monotone enhancing: {'yes' if report.monotone_enhancing else 'no'}")
    if not summary_only:
        payload = {
            "family_key": key,
            "entries": [
                {
                    "parameter": e.parameter,
                    "min_re_n": e.min_re_n,
                    "at_detuning": e.at_detuning,
                }
                for e in report.entries
            ],
            "monotone_enhancing": report.monotone_enhancing,
        }
        path = config.output_path.with_name(
            config.output_path.stem + "_monotonicity.json"
        )
        _write_text(path, json.dumps(payload, indent=2) + "\n")
        print(f"wrote {path}")
    return status


def _parse_set_args(pairs: list[str]) -> dict[str, str]:
    sets: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise RangeError(f"--set expects key=value, got {pair!r}")
        sets[key.strip()] = value.strip()
    return sets


def _parse_family_arg(raw: str) -> tuple[str, list[float]]:
    key, sep, values = raw.partition("=")
    key = key.strip()
    if not sep or key not in FAMILY_KEYS:
        raise RangeError(
            f"--family expects KEY=V1,V2,... with KEY in {FAMILY_KEYS}, got {raw!r}"
        )
    try:
        parsed = [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise RangeError(f"--family values must be numbers, got {values!r}") from None
    if len(parsed) < 2:
        raise RangeError("--family needs at least two values")
    return key, parsed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqdoptics",
        description=(
            "Sweep the steady-state optical response of the tunnel-coupled "
            "triple-dot medium and report left-handed bands and "
            "zero-absorption windows."
        ),
    )
    parser.add_argument("--config", type=Path, help="config document (key = value lines)")
    parser.add_argument("--preset", choices=PRESET_NAMES, help="scenario preset")
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable, highest precedence)",
    )
    parser.add_argument("--output", help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="re-check every 50th grid point against the time-domain integrator",
    )
    parser.add_argument(
        "--summary-only",
        action="store_true",
        help="print the summary without writing output files",
    )
    parser.add_argument(
        "--family",
        metavar="KEY=V1,V2,...",
        help="run one sweep per value of a family parameter and report "
        "monotonicity of min Re n",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = None
        if args.config is not None:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                raise RangeError(f"cannot read config file: {exc}") from exc
            file_values = parse_document(text)
        config = resolve(
            file_values=file_values,
            cli_preset=args.preset,
            cli_sets=_parse_set_args(args.set),
            cli_output=args.output,
            cli_format=args.format,
        )
        if args.family is not None:
            key, values = _parse_family_arg(args.family)
            return run_family(
                config, key, values, oracle=args.oracle, summary_only=args.summary_only
            )
        return run(config, oracle=args.oracle, summary_only=args.summary_only)
    except ConfigError as exc:
        print(f"error: category={exc.category} {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"error: category={exc.category} {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except TqdOpticsError as exc:
        print(f"error: category={exc.category} {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
