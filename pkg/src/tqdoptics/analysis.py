"""Detuning and parameter sweeps, band/window detection, family reports.

Window and band edges are refined on the piecewise-linear interpolant of
the sampled curve: within each grid cell the interpolant is linear, so
candidate sign changes are bracketed by the cell edges plus the interior
kinks of the combined function (zeros for |Im n|, pairwise intersections
for the triple-negativity test) and then bisected.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AllPointsFailedError,
    GridMismatchError,
    InvalidParameterError,
    NumericalError,
)
from .model import MaterialConstants, RateUnit, TqdParams
from .response import (
    DEFAULT_POLE_GUARD,
    ResponsePoint,
    evaluate_response,
)
from .solver import DEFAULT_SOLVE_TOL

REFINE_TOL = 1e-4  # detuning resolution of bisected edges, in Gamma_10
DEFAULT_ABS_TOL_FRACTION = 0.02  # of max |Im n| over the sweep


class SweepAxis(str, Enum):
    DETUNING_P = "detuning_p"
    PUMP_RATE = "pump_rate"
    TUNNELING_A = "tunneling_a"
    TUNNELING_B = "tunneling_b"


@dataclass(frozen=True)
class SweepSpec:
    """Uniform, endpoint-inclusive grid over one parameter axis."""

    axis: SweepAxis
    start: float
    stop: float
    steps: int
    base: TqdParams
    consts: MaterialConstants
    rate_unit: RateUnit = RateUnit()

    def __post_init__(self) -> None:
        if self.steps < 2:
            raise InvalidParameterError(f"steps must be >= 2, got {self.steps}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise InvalidParameterError("sweep endpoints must be finite")
        if not self.start < self.stop:
            raise InvalidParameterError(
                f"start must be < stop, got [{self.start}, {self.stop}]"
            )

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, value: float) -> TqdParams:
        return replace(self.base, **{self.axis.value: value})


@dataclass(frozen=True, eq=False)
class ResponseCurve:
    """Sampled response along one axis; failed points stay as gaps."""

    spec: SweepSpec
    grid: np.ndarray
    points: tuple[ResponsePoint | None, ...]
    failures: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        if grid.ndim != 1 or len(grid) != len(self.points):
            raise InvalidParameterError("grid and points must have equal length")
        deltas = np.diff(grid)
        if len(deltas) and not (np.all(deltas > 0) or np.all(deltas < 0)):
            raise InvalidParameterError("grid must be strictly monotone")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "failures", tuple(self.failures))

    def series(self, extract: Callable[[ResponsePoint], float]) -> np.ndarray:
        """Real-valued series over the grid, NaN at gaps."""
        return np.array(
            [extract(p) if p is not None else np.nan for p in self.points]
        )

    def valid_points(self) -> list[ResponsePoint]:
        return [p for p in self.points if p is not None]


def sweep(
    spec: SweepSpec,
    *,
    solve_tol: float = DEFAULT_SOLVE_TOL,
    pole_guard: float = DEFAULT_POLE_GUARD,
) -> ResponseCurve:
    """Evaluate the response at every grid point; record failures as gaps."""
    points: list[ResponsePoint | None] = []
    failures: list[tuple[int, str]] = []
    for index, value in enumerate(spec.grid()):
        try:
            point = evaluate_response(
                spec.params_at(float(value)),
                spec.consts,
                spec.rate_unit,
                solve_tol=solve_tol,
                pole_guard=pole_guard,
            )
        except NumericalError as exc:
            points.append(None)
            failures.append((index, exc.category))
        else:
            points.append(point)
    if not any(p is not None for p in points):
        raise AllPointsFailedError(
            f"all {spec.steps} sweep points failed; first failure: {failures[0][1]}"
        )
    return ResponseCurve(
        spec=spec, grid=spec.grid(), points=tuple(points), failures=tuple(failures)
    )


@dataclass(frozen=True)
class Interval:
    """Closed detuning interval [lo, hi] in Gamma_10 units."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise InvalidParameterError(f"interval bounds out of order: {self}")

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


@dataclass(frozen=True)
class WindowReport:
    """Left-handed bands and transparency windows of one detuning curve."""

    left_handed_bands: tuple[Interval, ...]
    zero_absorption_windows: tuple[Interval, ...]
    windows_inside_lh: tuple[Interval, ...]
    symmetry_defect: float
    abs_tol: float


def _bisect_flip(
    f: Callable[[float], float], lo: float, hi: float, tol: float = REFINE_TOL
) -> float:
    """Locate the sign flip of ``f`` inside (lo, hi) to within ``tol``."""
    inside_lo = f(lo) < 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0.0) == inside_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _intervals_below_zero(
    xs: np.ndarray,
    f: Callable[[float], float],
    cell_breakpoints: Callable[[int], Sequence[float]],
) -> list[Interval]:
    """Intervals where the continuous, cellwise piecewise-linear ``f`` < 0.

    ``cell_breakpoints(k)`` returns interior kink abscissae of ``f`` in
    cell k, so every monotone piece is sampled before bisection.
    """
    samples: list[float] = [float(xs[0])]
    for k in range(len(xs) - 1):
        x0, x1 = float(xs[k]), float(xs[k + 1])
        for b in sorted(cell_breakpoints(k)):
            if x0 < b < x1:
                samples.append(b)
        samples.append(x1)

    state = f(samples[0]) < 0.0
    opened = samples[0] if state else None
    intervals: list[Interval] = []
    for a, b in zip(samples, samples[1:]):
        state_b = f(b) < 0.0
        if state_b != state:
            edge = _bisect_flip(f, a, b)
            if state_b:
                opened = edge
            else:
                intervals.append(Interval(opened, edge))
                opened = None
            state = state_b
    if state and opened is not None:
        intervals.append(Interval(opened, samples[-1]))
    return intervals


def _valid_segments(points: Sequence[ResponsePoint | None]) -> list[tuple[int, int]]:
    """Half-open index ranges of consecutive valid points."""
    segments = []
    start = None
    for i, p in enumerate(points):
        if p is not None and start is None:
            start = i
        elif p is None and start is not None:
            segments.append((start, i))
            start = None
    if start is not None:
        segments.append((start, len(points)))
    return segments


def _linear(xs: np.ndarray, ys: np.ndarray) -> Callable[[float], float]:
    return lambda x: float(np.interp(x, xs, ys))


def _zero_of_segment(x0: float, x1: float, y0: float, y1: float) -> list[float]:
    if y0 == y1 or (y0 < 0.0) == (y1 < 0.0):
        return []
    return [x0 + (x1 - x0) * y0 / (y0 - y1)]


def _pairwise_intersections(
    x0: float, x1: float, ys: np.ndarray, k: int
) -> list[float]:
    """Abscissae where two of the interpolated series cross inside cell k."""
    points = []
    n_series = ys.shape[0]
    for a in range(n_series):
        for b in range(a + 1, n_series):
            d0 = ys[a, k] - ys[b, k]
            d1 = ys[a, k + 1] - ys[b, k + 1]
            if d0 == d1:
                continue
            t = d0 / (d0 - d1)
            if 0.0 < t < 1.0:
                points.append(x0 + t * (x1 - x0))
    return points


def detect_windows(curve: ResponseCurve, abs_tol: float) -> WindowReport:
    """Zero-absorption windows, left-handed bands and their symmetry metric.

    Windows are the intervals with |Im n| < abs_tol; bands require
    Re eps_r, Re mu_r and Re n simultaneously negative. Both kinds of edge
    are bisected on the interpolated curve to 1e-4 Gamma_10. The symmetry
    defect pairs off-resonance windows left/right of zero detuning in
    order of |center| and reports the worst |c_left + c_right|; unpaired
    windows contribute zero.
    """
    if curve.spec.axis is not SweepAxis.DETUNING_P:
        raise InvalidParameterError("window detection needs a detuning sweep")
    if not abs_tol > 0.0:
        raise InvalidParameterError(f"abs_tol must be > 0, got {abs_tol!r}")

    xs_all = curve.grid
    points_all = list(curve.points)
    if xs_all[0] > xs_all[-1]:
        xs_all = xs_all[::-1]
        points_all = points_all[::-1]

    windows: list[Interval] = []
    bands: list[Interval] = []
    for lo, hi in _valid_segments(points_all):
        xs = np.asarray(xs_all[lo:hi], dtype=float)
        seg = points_all[lo:hi]
        im_n = np.array([p.n.imag for p in seg])
        re_parts = np.array(
            [
                [p.eps_r.real for p in seg],
                [p.mu_r.real for p in seg],
                [p.n.real for p in seg],
            ]
        )
        if len(xs) == 1:
            x = float(xs[0])
            if abs(im_n[0]) < abs_tol:
                windows.append(Interval(x, x))
            if np.all(re_parts[:, 0] < 0.0):
                bands.append(Interval(x, x))
            continue

        interp_im = _linear(xs, im_n)
        windows.extend(
            _intervals_below_zero(
                xs,
                lambda x: abs(interp_im(x)) - abs_tol,
                lambda k: _zero_of_segment(
                    float(xs[k]), float(xs[k + 1]), im_n[k], im_n[k + 1]
                ),
            )
        )

        interp_re = [_linear(xs, re_parts[i]) for i in range(3)]
        bands.extend(
            _intervals_below_zero(
                xs,
                lambda x: max(g(x) for g in interp_re),
                lambda k: _pairwise_intersections(
                    float(xs[k]), float(xs[k + 1]), re_parts, k
                ),
            )
        )

    windows.sort(key=lambda w: w.lo)
    bands.sort(key=lambda b: b.lo)
    inside = tuple(w for w in windows if any(w.overlaps(b) for b in bands))

    side_windows = [w for w in windows if not w.contains(0.0)]
    lefts = sorted(
        (w for w in side_windows if w.center < 0.0), key=lambda w: abs(w.center)
    )
    rights = sorted(
        (w for w in side_windows if w.center > 0.0), key=lambda w: abs(w.center)
    )
    defect = 0.0
    for left, right in zip(lefts, rights):
        defect = max(defect, abs(left.center + right.center))

    return WindowReport(
        left_handed_bands=tuple(bands),
        zero_absorption_windows=tuple(windows),
        windows_inside_lh=inside,
        symmetry_defect=defect,
        abs_tol=abs_tol,
    )


def default_abs_tol(curve: ResponseCurve) -> float:
    """Default transparency threshold: 2% of max |Im n| over the sweep."""
    magnitudes = [abs(p.n.imag) for p in curve.valid_points()]
    peak = max(magnitudes, default=0.0)
    if peak <= 0.0:
        raise InvalidParameterError(
            "cannot derive abs_tol from a curve with no absorption at all"
        )
    return DEFAULT_ABS_TOL_FRACTION * peak


@dataclass(frozen=True)
class MonotonicityEntry:
    parameter: float
    min_re_n: float
    at_detuning: float


@dataclass(frozen=True)
class MonotonicityReport:
    """Per-curve minima of Re n over a one-parameter family of sweeps."""

    entries: tuple[MonotonicityEntry, ...]
    monotone_enhancing: bool


def monotonicity_report(
    curves: Sequence[ResponseCurve], parameter_values: Sequence[float]
) -> MonotonicityReport:
    """Minima of Re n per curve; flags nonincreasing families.

    All curves must share one grid (GridMismatchError otherwise); curve
    order defines the parameter order of the monotonicity check.
    """
    if len(curves) < 2:
        raise GridMismatchError("need at least two curves for a family report")
    if len(curves) != len(parameter_values):
        raise GridMismatchError("one parameter value per curve is required")
    reference = curves[0].grid
    for curve in curves[1:]:
        if len(curve.grid) != len(reference) or not np.array_equal(
            curve.grid, reference
        ):
            raise GridMismatchError("curves do not share one detuning grid")

    entries = []
    for value, curve in zip(parameter_values, curves):
        re_n = curve.series(lambda p: p.n.real)
        if np.all(np.isnan(re_n)):
            raise AllPointsFailedError("a family curve has no valid points")
        index = int(np.nanargmin(re_n))
        entries.append(
            MonotonicityEntry(
                parameter=float(value),
                min_re_n=float(re_n[index]),
                at_detuning=float(curve.grid[index]),
            )
        )
    minima = [e.min_re_n for e in entries]
    monotone = all(b <= a for a, b in zip(minima, minima[1:]))
    return MonotonicityReport(entries=tuple(entries), monotone_enhancing=monotone)
