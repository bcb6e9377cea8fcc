# -*- coding: utf-8 -*-
"""
PluralWV Estimation
Recovering the P2 angle beta from measured quantities, and the systematic
error made when a plural weak value is read through the purely imaginary
(scheme b) model
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List

import numpy as np
from scipy.optimize import bisect

from pluralwv.config import PEAK_MATCH_REL, ROOT_REL_TOL
from pluralwv.core.pointer import GaussianPointer, PointerShift, infer_weak_value
from pluralwv.core.weak_value import SchemeConfig, SchemeKind, closed_form
from pluralwv.errors import InvalidArgumentError, PluralWVError, require_finite

log = logging.getLogger(__name__)

QUARTER_PI = np.pi / 4
HALF_PI = np.pi / 2
BISECT_MAXITER = 200


class EstimatorKind(Enum):
    """Which measured quantity is inverted back to beta"""
    IM_BASED = "im_based"      # |Im A_w| from the momentum shift
    AB_BASED = "ab_based"      # |A_w| from both pointer shifts
    PROB_BASED = "prob_based"  # post-selection probability


@dataclass(frozen=True)
class ErrorRecord:
    """Systematic error of one estimator at one (beta, alpha) point"""
    beta_true: float
    alpha_deflection: float
    estimator: EstimatorKind
    measured: float
    beta_hat: float
    err: float  # beta_hat - beta_true
    ok: bool = True
    error: str = ""


@dataclass(frozen=True)
class SensitivityDeficit:
    """Sensitivity lost to the P1 deflection, relative to the scheme b design"""
    beta: float
    alpha: float
    design: float        # cot(beta)
    im_deflected: float  # |Im A_w| in scheme c
    ab_deflected: float  # |A_w| in scheme c

    @property
    def im_gap(self) -> float:
        return self.design - self.im_deflected

    @property
    def ab_gap(self) -> float:
        return self.design - self.ab_deflected


def measure(cfg: SchemeConfig, kind: EstimatorKind) -> float:
    """Noiseless reading of the estimator's input quantity"""
    wv = closed_form(cfg)
    if kind is EstimatorKind.IM_BASED:
        return abs(wv.im)
    if kind is EstimatorKind.AB_BASED:
        return wv.ab
    return wv.prob


def estimate_beta(measured: float, kind: EstimatorKind) -> float:
    """
    Invert a measurement through the ideal scheme b model

    |Im A_w| = |A_w| = cot(beta) and P = sin^2(beta); principal branch,
    beta_hat in (0, pi/2).
    """
    measured = require_finite("measured", measured)

    if kind is EstimatorKind.PROB_BASED:
        if not 0.0 < measured <= 1.0:
            raise InvalidArgumentError(f"probability must lie in (0, 1], got {measured}")
        return float(np.arcsin(np.sqrt(measured)))

    if measured <= 0.0:
        raise InvalidArgumentError(f"{kind.value} measurement must be > 0, got {measured}")
    return float(np.arctan(1.0 / measured))


def estimate_beta_from_shifts(shift: PointerShift, ptr: GaussianPointer, kind: EstimatorKind) -> float:
    """beta_hat from measured pointer shifts (weak value reconstructed to first order)"""
    if kind is EstimatorKind.PROB_BASED:
        raise InvalidArgumentError("pointer shifts carry no post-selection probability")

    aw = infer_weak_value(shift, ptr)
    measured = abs(aw.imag) if kind is EstimatorKind.IM_BASED else abs(aw)
    return estimate_beta(measured, kind)


def systematic_error(beta_true: float, alpha_deflection: float, kind: EstimatorKind) -> ErrorRecord:
    """err(beta) when scheme c (deflected P1) is read as scheme b"""
    cfg = SchemeConfig(SchemeKind.C, alpha=alpha_deflection, beta=beta_true)
    measured = measure(cfg, kind)
    beta_hat = estimate_beta(measured, kind)

    return ErrorRecord(
        beta_true=cfg.beta,
        alpha_deflection=cfg.alpha,
        estimator=kind,
        measured=measured,
        beta_hat=beta_hat,
        err=beta_hat - cfg.beta,
    )


def _record_or_flag(beta_true: float, alpha: float, kind: EstimatorKind) -> ErrorRecord:
    try:
        return systematic_error(beta_true, alpha, kind)
    except PluralWVError as e:
        log.warning(f"beta={beta_true:.3g}, alpha={alpha:.3g}, {kind.value}: {e.detail}")
        return ErrorRecord(
            beta_true=beta_true, alpha_deflection=alpha, estimator=kind,
            measured=np.nan, beta_hat=np.nan, err=np.nan, ok=False, error=e.code,
        )


def error_curve(beta_grid: Iterable[float], alpha_deflection: float) -> List[ErrorRecord]:
    """err(beta) for every estimator over a grid of true beta, ordered by (beta, estimator)"""
    records = [
        _record_or_flag(float(beta), alpha_deflection, kind)
        for beta in sorted(beta_grid)
        for kind in EstimatorKind
    ]
    log.info(f"Error curve: {len(records)} records at alpha={alpha_deflection:.3g}")
    return records


def error_vs_deflection(beta_true: float, alpha_grid: Iterable[float]) -> List[ErrorRecord]:
    """err(beta) dependence on the P1 deflection, ordered by (alpha, estimator)"""
    records = [
        _record_or_flag(beta_true, float(alpha), kind)
        for alpha in sorted(alpha_grid)
        for kind in EstimatorKind
    ]
    log.info(f"Deflection curve: {len(records)} records at beta={beta_true:.3g}")
    return records


def sensitivity_deficit(beta: float, alpha: float) -> SensitivityDeficit:
    """Compare the scheme b design reading cot(beta) with what scheme c delivers"""
    design = closed_form(SchemeConfig(SchemeKind.B, beta=beta))
    deflected = closed_form(SchemeConfig(SchemeKind.C, alpha=alpha, beta=beta))
    return SensitivityDeficit(
        beta=beta,
        alpha=alpha,
        design=abs(design.im),
        im_deflected=abs(deflected.im),
        ab_deflected=deflected.ab,
    )


def im_magnitude(alpha: float, beta: float) -> float:
    """|Im A_w| of scheme c: sin2b cos2a / (2P)"""
    return abs(closed_form(SchemeConfig(SchemeKind.C, alpha=alpha, beta=beta)).im)


def invert_im_two_branch(
    im_target: float,
    alpha: float,
    rel_tol: float = ROOT_REL_TOL,
    peak_match_rel: float = PEAK_MATCH_REL,
) -> List[float]:
    """
    Solve |Im A_w,c|(alpha, beta) = im_target for beta in (0, pi/4)

    For alpha < pi/4, |Im| rises on (0, alpha), peaks at beta = alpha with
    value cot(2 alpha), then falls; each monotone branch is bisected
    separately. For alpha >= pi/4 the peak lies beyond pi/4 and |Im| only
    rises, up to |cos(2 alpha)| at pi/4.

    Returns:
        Ascending roots: two below the peak value, one at it, none above it
    """
    im_target = require_finite("im_target", im_target)
    alpha = require_finite("alpha", alpha)
    if not 0.0 < alpha < HALF_PI:
        raise InvalidArgumentError(f"alpha must lie in (0, pi/2), got {alpha}")
    if im_target <= 0.0:
        raise InvalidArgumentError(f"im_target must be > 0, got {im_target}")

    def gap(beta: float) -> float:
        return im_magnitude(alpha, beta) - im_target

    xtol = np.finfo(float).tiny
    rtol = 4 * np.finfo(float).eps

    if alpha >= QUARTER_PI:
        if gap(QUARTER_PI) < 0.0:
            log.info(f"Target {im_target:.6g} above |Im|(pi/4) at alpha={alpha:.6g}: no root")
            return []
        roots = [bisect(gap, 0.0, QUARTER_PI, xtol=xtol, rtol=rtol, maxiter=BISECT_MAXITER)]
    else:
        peak = im_magnitude(alpha, alpha)
        if abs(im_target - peak) <= peak_match_rel * peak:
            log.info(f"Target {im_target:.6g} sits on the peak: single root beta = alpha")
            return [alpha]
        if im_target > peak:
            log.info(f"Target {im_target:.6g} above peak {peak:.6g}: no root")
            return []

        roots = [bisect(gap, 0.0, alpha, xtol=xtol, rtol=rtol, maxiter=BISECT_MAXITER)]

        # Falling branch ends at |Im|(pi/4) = cos(2 alpha)
        if gap(QUARTER_PI) < 0.0:
            roots.append(bisect(gap, alpha, QUARTER_PI, xtol=xtol, rtol=rtol, maxiter=BISECT_MAXITER))

    for root in roots:
        residual = abs(gap(root)) / im_target
        if residual > rel_tol:
            log.warning(f"root {root:.12g} leaves relative residual {residual:.2e}")

    log.debug(f"alpha={alpha:.6g} target={im_target:.6g} roots={roots}")
    return sorted(float(r) for r in roots)
