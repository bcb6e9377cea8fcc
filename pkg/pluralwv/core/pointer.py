# -*- coding: utf-8 -*-
"""
PluralWV Pointer Dynamics
Gaussian probe: first-order pointer shifts and the exact post-selected pointer

The exact path keeps every order of exp(-i tau A p). Since A has eigenvectors
|H>, |V> with eigenvalues +1, -1, the post-selected pointer is

    phi(q) = c+ G(q - tau) + c- G(q + tau),   c+ = <f|H><H|i>,  c- = <f|V><V|i>

with G the initial Gaussian, Var(p) = W^2 (position std 1/(2W)). Moments are
taken by trapezoidal quadrature in position space and, independently, from
the analytic momentum amplitude (c+ e^{-ip tau} + c- e^{ip tau}) G~(p).
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np
from scipy.integrate import trapezoid

from pluralwv.config import EPS_DIV, MASS_TOLERANCE, QUADRATURE_POINTS, WEAKNESS_WARNING
from pluralwv.core.weak_value import SchemeConfig, WeakValueResult, closed_form, post_state, pre_state
from pluralwv.errors import (
    InvalidArgumentError,
    OrthogonalPostselectionError,
    PluralWVError,
    ResolutionError,
    require_finite,
)

log = logging.getLogger(__name__)

# Max phase advance of exp(2 i p tau) per momentum grid step
MAX_PHASE_STEP = 0.1


@dataclass(frozen=True)
class GaussianPointer:
    """Initial probe: momentum std w (Var(p) = w^2) and coupling strength tau"""
    w: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        w = require_finite("w", self.w)
        tau = require_finite("tau", self.tau)
        if w <= 0:
            raise InvalidArgumentError(f"w must be > 0, got {w}")
        if tau < 0:
            raise InvalidArgumentError(f"tau must be >= 0, got {tau}")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "tau", tau)

    @property
    def sigma_q(self) -> float:
        """Position-space standard deviation of |G|^2"""
        return 1.0 / (2.0 * self.w)


@dataclass(frozen=True)
class PointerShift:
    """Mean pointer displacement after post-selection"""
    dq: float
    dp: float
    weakness: float  # tau |A_w|
    weak_regime: bool = True


@dataclass(frozen=True)
class QuadratureSpec:
    """Uniform trapezoidal grid: [-L, L], L = width_sigmas * sigma + tau_margin * |tau|"""
    points: int = QUADRATURE_POINTS
    width_sigmas: float = 10.0
    tau_margin: float = 10.0
    mass_tolerance: float = MASS_TOLERANCE

    def __post_init__(self):
        if self.points < 16:
            raise InvalidArgumentError(f"quadrature needs >= 16 points, got {self.points}")
        if self.width_sigmas <= 0 or self.tau_margin < 0:
            raise InvalidArgumentError("quadrature widths must be positive")


@dataclass(frozen=True)
class ExactEvolution:
    """Exact post-selected pointer moments and survival probability"""
    shift: PointerShift
    probability: float


@dataclass(frozen=True)
class ConvergenceRow:
    """One tau of the first-order vs exact comparison"""
    tau: float
    dq_exact: float
    dq_first: float
    dp_exact: float
    dp_first: float
    weakness: float
    ok: bool = True
    error: str = ""

    @property
    def dq_residual(self) -> float:
        return self.dq_exact - self.dq_first

    @property
    def dp_residual(self) -> float:
        return self.dp_exact - self.dp_first

    def agrees(self, rel_tol: float, atol: float = 1e-12) -> bool:
        """First order within rel_tol of the exact shifts"""
        return (
            self.ok
            and abs(self.dq_residual) <= rel_tol * abs(self.dq_first) + atol
            and abs(self.dp_residual) <= rel_tol * abs(self.dp_first) + atol
        )


def first_order_shifts(
    wv: WeakValueResult,
    ptr: GaussianPointer,
    warn_above: float = WEAKNESS_WARNING,
) -> PointerShift:
    """dq = tau Re[A_w], dp = 2 tau W^2 Im[A_w]"""
    weakness = ptr.tau * wv.ab
    weak_regime = weakness <= warn_above
    if not weak_regime:
        log.warning(f"tau|A_w| = {weakness:.3g} exceeds {warn_above}: first-order shifts unreliable")

    return PointerShift(
        dq=ptr.tau * wv.re,
        dp=2.0 * ptr.tau * ptr.w ** 2 * wv.im,
        weakness=weakness,
        weak_regime=weak_regime,
    )


def infer_weak_value(shift: PointerShift, ptr: GaussianPointer) -> complex:
    """Invert the first-order relations: Re = dq / tau, Im = dp / (2 tau W^2)"""
    if ptr.tau <= 0:
        raise InvalidArgumentError("cannot infer a weak value without coupling (tau = 0)")
    return complex(shift.dq / ptr.tau, shift.dp / (2.0 * ptr.tau * ptr.w ** 2))


def _gaussian(x: np.ndarray, sigma: float) -> np.ndarray:
    """Normalized Gaussian amplitude, |.|^2 has standard deviation sigma"""
    return (2.0 * np.pi * sigma ** 2) ** -0.25 * np.exp(-x ** 2 / (4.0 * sigma ** 2))


def _check_mass(x: np.ndarray, sigma: float, spec: QuadratureSpec, space: str):
    mass = trapezoid(_gaussian(x, sigma) ** 2, x)
    log.debug(f"{space}-space Gaussian mass on grid: {mass:.15f}")
    if abs(mass - 1.0) > spec.mass_tolerance:
        raise ResolutionError(
            f"{space} grid ({spec.points} points, half-width {x[-1]:.3g}) "
            f"captures Gaussian mass {mass:.12f}"
        )


def exact_moments(
    c_plus: complex,
    c_minus: complex,
    w: float,
    tau: float,
    quadrature: QuadratureSpec = QuadratureSpec(),
) -> ExactEvolution:
    """
    Exact pointer moments for arbitrary eigen-coefficients

    tau may be negative here (mirror displacement), unlike GaussianPointer.

    Raises:
        OrthogonalPostselectionError: c+ = c- = 0, or nothing survives post-selection
        ResolutionError: grid does not resolve the Gaussian or the displacement
    """
    c_plus, c_minus = complex(c_plus), complex(c_minus)
    w = require_finite("w", w)
    tau = require_finite("tau", tau)
    if w <= 0:
        raise InvalidArgumentError(f"w must be > 0, got {w}")
    if abs(c_plus) < EPS_DIV and abs(c_minus) < EPS_DIV:
        raise OrthogonalPostselectionError("c+ = c- = 0: post-selection annihilates the pointer")

    sigma_q = 1.0 / (2.0 * w)
    half_q = quadrature.width_sigmas * sigma_q + quadrature.tau_margin * abs(tau)
    q = np.linspace(-half_q, half_q, quadrature.points)
    _check_mass(q, sigma_q, quadrature, "position")

    phi = c_plus * _gaussian(q - tau, sigma_q) + c_minus * _gaussian(q + tau, sigma_q)
    density = np.abs(phi) ** 2
    probability = float(trapezoid(density, q))
    if not probability > EPS_DIV ** 2:
        raise OrthogonalPostselectionError(f"post-selected pointer norm {probability:.3e} vanishes")
    dq = float(trapezoid(q * density, q) / probability)

    half_p = quadrature.width_sigmas * w
    p = np.linspace(-half_p, half_p, quadrature.points)
    if 2.0 * abs(tau) * (p[1] - p[0]) > MAX_PHASE_STEP:
        raise ResolutionError(f"momentum grid too coarse for tau={tau:.3g}")
    _check_mass(p, w, quadrature, "momentum")

    phi_p = (c_plus * np.exp(-1j * p * tau) + c_minus * np.exp(1j * p * tau)) * _gaussian(p, w)
    density_p = np.abs(phi_p) ** 2
    dp = float(trapezoid(p * density_p, p) / trapezoid(density_p, p))

    overlap = c_plus + c_minus
    weakness = abs(tau) * abs((c_plus - c_minus) / overlap) if abs(overlap) >= EPS_DIV else np.inf

    return ExactEvolution(
        shift=PointerShift(dq=dq, dp=dp, weakness=float(weakness), weak_regime=weakness <= WEAKNESS_WARNING),
        probability=probability,
    )


def eigen_coefficients(cfg: SchemeConfig) -> tuple:
    """(c+, c-) = (<f|H><H|i>, <f|V><V|i>) for the scheme"""
    pre, post = pre_state(cfg), post_state(cfg)
    return post.amp_h.conjugate() * pre.amp_h, post.amp_v.conjugate() * pre.amp_v


def evolve_exact(
    cfg: SchemeConfig,
    ptr: GaussianPointer,
    quadrature: QuadratureSpec = QuadratureSpec(),
) -> ExactEvolution:
    """Exact post-selected pointer shift and probability for a scheme"""
    c_plus, c_minus = eigen_coefficients(cfg)
    result = exact_moments(c_plus, c_minus, ptr.w, ptr.tau, quadrature)
    log.debug(
        f"scheme {cfg.kind.value} tau={ptr.tau:.3g}: dq={result.shift.dq:.6e} "
        f"dp={result.shift.dp:.6e} P={result.probability:.6e}"
    )
    return result


def convergence_study(
    cfg: SchemeConfig,
    ptr: GaussianPointer,
    tau_list: Iterable[float],
    quadrature: QuadratureSpec = QuadratureSpec(),
    strict: bool = True,
    warn_above: float = WEAKNESS_WARNING,
) -> List[ConvergenceRow]:
    """
    Exact vs first-order shifts over a list of coupling strengths

    Args:
        cfg: Scheme under test
        ptr: Probe; its tau is replaced by each entry of tau_list
        tau_list: Coupling strengths, evaluated in the given order
        strict: Re-raise per-tau failures instead of flagging the row
        warn_above: tau|A_w| above which first-order shifts are flagged

    Returns:
        One ConvergenceRow per tau
    """
    wv = closed_form(cfg)
    rows = []

    for tau in tau_list:
        probe = GaussianPointer(w=ptr.w, tau=tau)
        first = first_order_shifts(wv, probe, warn_above)
        try:
            exact = evolve_exact(cfg, probe, quadrature)
        except PluralWVError as e:
            if strict:
                raise
            log.warning(f"tau={tau:.3g}: exact evolution failed: {e.detail}")
            rows.append(ConvergenceRow(
                tau=probe.tau, dq_exact=np.nan, dq_first=first.dq,
                dp_exact=np.nan, dp_first=first.dp, weakness=first.weakness,
                ok=False, error=e.code,
            ))
            continue

        rows.append(ConvergenceRow(
            tau=probe.tau,
            dq_exact=exact.shift.dq,
            dq_first=first.dq,
            dp_exact=exact.shift.dp,
            dp_first=first.dp,
            weakness=first.weakness,
        ))

    log.info(f"Convergence study: scheme {cfg.kind.value}, {len(rows)} couplings")
    return rows
