# -*- coding: utf-8 -*-
"""
PluralWV Sweep Analysis
Angle sweeps, sensitivity peak localization and anomaly classification

The anomaly: for a fixed P2 deflection beta > 0, Re[A_w] of scheme c rises
with alpha up to alpha = beta while the post-selection probability also
rises, so a smaller P comes with a smaller (not larger) sensitivity.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from pluralwv.config import Defaults
from pluralwv.core.weak_value import SchemeConfig, SchemeKind, closed_form
from pluralwv.errors import (
    InvalidArgumentError,
    PluralWVError,
    RangeError,
    ResolutionError,
    require_finite,
)

log = logging.getLogger(__name__)

MIN_POINTS_PER_SIDE = 3
SPACINGS = ("linear", "log")
HALF_PI = np.pi / 2


@dataclass(frozen=True)
class AngleGrid:
    """count angles from start to stop, linearly or logarithmically spaced"""
    start: float
    stop: float
    count: int
    spacing: str = "log"

    def __post_init__(self):
        start = require_finite("start", self.start)
        stop = require_finite("stop", self.stop)
        if self.spacing not in SPACINGS:
            raise InvalidArgumentError(f"spacing must be one of {SPACINGS}, got {self.spacing!r}")
        if int(self.count) < 2:
            raise InvalidArgumentError(f"grid count must be >= 2, got {self.count}")
        if stop <= start:
            raise InvalidArgumentError(f"grid stop ({stop}) must exceed start ({start})")
        if self.spacing == "log" and start <= 0:
            raise InvalidArgumentError("log spacing requires start > 0")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "stop", stop)
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def parse(cls, text: str) -> "AngleGrid":
        """Parse 'start:stop:count[:spacing]'"""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise InvalidArgumentError(f"grid must be start:stop:count[:spacing], got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise InvalidArgumentError(f"malformed grid {text!r}")
        spacing = parts[3] if len(parts) == 4 else "log"
        return cls(start, stop, count, spacing)

    def scaled(self, factor: float) -> "AngleGrid":
        return AngleGrid(self.start * factor, self.stop * factor, self.count, self.spacing)

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


GridLike = Union[AngleGrid, Sequence[float], np.ndarray]


def default_angles(center: Optional[float] = None, defaults: Defaults = Defaults()) -> np.ndarray:
    """
    Log grid over the default decades, refined linearly around `center`

    The refinement spans [center/2, 3 center/2] and may run past grid_stop;
    it stops short of pi/2, where the angles leave their valid range.
    """
    base = np.geomspace(defaults.grid_start, defaults.grid_stop, defaults.grid_count)
    if center is None or center <= 0 or defaults.refine_count == 0:
        return base

    lo = max(0.5 * center, defaults.grid_start)
    hi = min(1.5 * center, 0.5 * (center + HALF_PI))
    if hi <= lo:
        return base
    return np.unique(np.concatenate([base, np.linspace(lo, hi, defaults.refine_count)]))


def resolve_angles(grid: Optional[GridLike], center: Optional[float] = None) -> np.ndarray:
    """Ascending angle array from a grid spec, explicit points, or the default grid"""
    if grid is None:
        angles = default_angles(center)
    elif isinstance(grid, AngleGrid):
        angles = grid.points()
    else:
        angles = np.asarray(grid, dtype=float)
    if angles.ndim != 1 or angles.size == 0:
        raise InvalidArgumentError("angle grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(angles)):
        raise InvalidArgumentError("angle grid contains non-finite values")
    return np.sort(angles)


@dataclass(frozen=True)
class SweepRow:
    """Weak value and probability at one (alpha, beta)"""
    alpha: float
    beta: float
    re_aw: float
    im_aw: float
    ab_aw: float
    prob: float
    ok: bool = True
    error: str = ""


def sweep(
    kind: SchemeKind,
    fixed_angle: float,
    grid: Optional[GridLike],
    fixed: str = "beta",
) -> List[SweepRow]:
    """
    Evaluate the closed-form weak value along one angle

    Kind a sweeps alpha, kind b sweeps beta; for kind c `fixed` names the
    angle held at `fixed_angle` and the other one is swept. Divergent points
    come back flagged (ok=False), never fabricated.
    """
    kind = SchemeKind(kind)
    fixed_angle = require_finite("fixed_angle", fixed_angle)
    if kind is SchemeKind.A:
        fixed = "beta"
    elif kind is SchemeKind.B:
        fixed = "alpha"
    if fixed not in ("alpha", "beta"):
        raise InvalidArgumentError(f"fixed must be 'alpha' or 'beta', got {fixed!r}")
    if kind is not SchemeKind.C and fixed_angle != 0.0:
        raise InvalidArgumentError(f"scheme {kind.value} has no {fixed} angle to hold at {fixed_angle}")

    rows = []
    for swept in resolve_angles(grid, center=fixed_angle or None):
        alpha, beta = (fixed_angle, float(swept)) if fixed == "alpha" else (float(swept), fixed_angle)
        try:
            wv = closed_form(SchemeConfig(kind, alpha, beta))
        except PluralWVError as e:
            log.warning(f"sweep point alpha={alpha:.3g}, beta={beta:.3g}: {e.detail}")
            rows.append(SweepRow(alpha, beta, np.nan, np.nan, np.nan, np.nan, ok=False, error=e.code))
            continue
        rows.append(SweepRow(alpha, beta, wv.re, wv.im, wv.ab, wv.prob))

    log.info(f"Sweep scheme {kind.value}, {fixed}={fixed_angle:.3g}: {len(rows)} rows")
    return rows


def _re_scheme_c(alpha: float, beta: float) -> float:
    return closed_form(SchemeConfig(SchemeKind.C, alpha, beta)).re


def find_sensitivity_peak(beta_fixed: float, search: Optional[GridLike] = None) -> float:
    """
    argmax over alpha of Re[A_w,c](alpha, beta_fixed)

    Grid argmax brackets the peak, golden-section search refines it. The
    analytic answer is alpha = beta_fixed.

    Raises:
        RangeError: the grid maximum sits on an endpoint
    """
    beta_fixed = require_finite("beta_fixed", beta_fixed)
    if not 0.0 < beta_fixed < np.pi / 4:
        raise InvalidArgumentError(f"beta_fixed must lie in (0, pi/4), got {beta_fixed}")

    alphas = resolve_angles(search, center=beta_fixed)
    re = np.array([_re_scheme_c(a, beta_fixed) for a in alphas])
    i = int(np.argmax(re))
    if i == 0 or i == len(alphas) - 1:
        raise RangeError(
            f"Re[A_w] peak for beta={beta_fixed:.3g} not inside [{alphas[0]:.3g}, {alphas[-1]:.3g}]"
        )

    try:
        res = minimize_scalar(
            lambda a: -_re_scheme_c(a, beta_fixed),
            bracket=(alphas[i - 1], alphas[i], alphas[i + 1]),
            method="golden",
        )
        peak = float(res.x)
    except ValueError:
        # flat triple at machine precision: the grid point is as good as it gets
        peak = float(alphas[i])

    log.debug(f"Sensitivity peak for beta={beta_fixed:.6g}: alpha={peak:.12g}")
    return peak


@dataclass(frozen=True)
class IntervalRegime:
    """Finite-difference classification of one grid interval"""
    alpha_lo: float
    alpha_hi: float
    d_re: float
    d_prob: float
    regime: str  # anomalous | normal | transition


@dataclass(frozen=True)
class AnomalyReport:
    """Where lowering P lowers the sensitivity, at a fixed P2 deflection"""
    beta_fixed: float
    alpha_peak: float
    anomaly_boundary: float
    anomalous_interval: Tuple[float, float]
    normal_interval: Tuple[float, float]
    intervals: Tuple[IntervalRegime, ...] = ()

    def regime_at(self, alpha: float) -> str:
        if 0.0 < alpha < self.anomaly_boundary:
            return "anomalous"
        if self.normal_interval[0] <= alpha <= self.normal_interval[1]:
            return "normal"
        return "outside"


def _classify(d_re: float, d_prob: float) -> str:
    if d_prob > 0 and d_re > 0:
        return "anomalous"
    if d_prob > 0 and d_re < 0:
        return "normal"
    return "transition"


def anomaly_report(beta_fixed: float, grid: Optional[GridLike] = None) -> AnomalyReport:
    """
    Classify alpha intervals by the joint signs of dRe/dalpha and dP/dalpha

    Anomalous: both rise. Normal: Re falls while P rises. beta_fixed = 0 is
    scheme a, which has no anomalous region.

    Raises:
        ResolutionError: fewer than 3 grid points on either side of beta_fixed
    """
    beta_fixed = require_finite("beta_fixed", beta_fixed)
    if not 0.0 <= beta_fixed < np.pi / 4:
        raise InvalidArgumentError(f"beta_fixed must lie in [0, pi/4), got {beta_fixed}")

    alphas = resolve_angles(grid, center=beta_fixed or None)
    if beta_fixed > 0:
        below = int(np.sum(alphas < beta_fixed))
        above = int(np.sum(alphas > beta_fixed))
        if below < MIN_POINTS_PER_SIDE or above < MIN_POINTS_PER_SIDE:
            raise ResolutionError(
                f"grid has {below} points below and {above} above beta={beta_fixed:.3g}; "
                f"need {MIN_POINTS_PER_SIDE} on each side"
            )
    elif alphas.size < 2:
        raise ResolutionError("anomaly classification needs at least 2 grid points")

    results = [closed_form(SchemeConfig(SchemeKind.C, float(a), beta_fixed)) for a in alphas]
    d_re = np.diff([r.re for r in results])
    d_prob = np.diff([r.prob for r in results])

    intervals = tuple(
        IntervalRegime(float(alphas[k]), float(alphas[k + 1]), float(d_re[k]), float(d_prob[k]),
                       _classify(d_re[k], d_prob[k]))
        for k in range(len(d_re))
    )

    boundary = 0.0
    for interval in intervals:
        if interval.regime != "anomalous":
            break
        boundary = interval.alpha_hi

    alpha_peak = find_sensitivity_peak(beta_fixed, alphas) if beta_fixed > 0 else 0.0
    if beta_fixed > 0:
        step = max(
            (iv.alpha_hi - iv.alpha_lo for iv in intervals if iv.alpha_lo <= alpha_peak <= iv.alpha_hi),
            default=0.0,
        )
        if abs(boundary - alpha_peak) > step:
            log.warning(f"anomaly boundary {boundary:.6g} off the peak {alpha_peak:.6g} by more than one step")

    counts = {name: sum(iv.regime == name for iv in intervals) for name in ("anomalous", "normal", "transition")}
    log.info(f"Anomaly report beta={beta_fixed:.3g}: boundary={boundary:.6g} {counts}")

    return AnomalyReport(
        beta_fixed=beta_fixed,
        alpha_peak=alpha_peak,
        anomaly_boundary=boundary,
        anomalous_interval=(0.0, boundary),
        normal_interval=(boundary if boundary > 0 else float(alphas[0]), float(alphas[-1])),
        intervals=intervals,
    )
