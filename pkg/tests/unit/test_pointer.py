# -*- coding: utf-8 -*-
"""
PluralWV - Pointer Dynamics Tests
"""
import logging

import numpy as np
import pytest

from pluralwv.core.pointer import (
    ConvergenceRow,
    GaussianPointer,
    PointerShift,
    QuadratureSpec,
    convergence_study,
    eigen_coefficients,
    evolve_exact,
    exact_moments,
    first_order_shifts,
    infer_weak_value,
)
from pluralwv.core.weak_value import SchemeConfig, SchemeKind, closed_form
from pluralwv.errors import InvalidArgumentError, OrthogonalPostselectionError, ResolutionError


def _scheme_a_dq(alpha, tau, w=1.0):
    """Exact position shift of scheme a with real eigen-coefficients"""
    c_plus = -np.sin(np.pi / 4 + alpha) / np.sqrt(2)
    c_minus = np.cos(np.pi / 4 + alpha) / np.sqrt(2)
    overlap = np.exp(-2 * tau ** 2 * w ** 2)
    return tau * (c_plus ** 2 - c_minus ** 2) / (c_plus ** 2 + c_minus ** 2 + 2 * c_plus * c_minus * overlap)


def _scheme_b_dp(beta, tau, w=1.0):
    """Exact momentum shift of scheme b"""
    x = np.exp(-2 * tau ** 2 * w ** 2)
    return -2 * tau * w ** 2 * np.sin(2 * beta) * x / (1 - np.cos(2 * beta) * x)


# ---------------------------------------------------------------
# PROBE
# ---------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [{"w": 0.0}, {"w": -1.0}, {"tau": -1e-3}, {"w": np.nan}])
def test_pointer_validation(kwargs):
    """w > 0 and tau >= 0"""
    with pytest.raises(InvalidArgumentError):
        GaussianPointer(**kwargs)


def test_pointer_position_width():
    """Var(p) = W^2 gives position std 1/(2W)"""
    assert GaussianPointer(w=2.0).sigma_q == 0.25


def test_quadrature_validation():
    """Too few points or a zero window are rejected"""
    with pytest.raises(InvalidArgumentError):
        QuadratureSpec(points=8)
    with pytest.raises(InvalidArgumentError):
        QuadratureSpec(width_sigmas=0.0)


# ---------------------------------------------------------------
# FIRST ORDER
# ---------------------------------------------------------------

def test_first_order_scheme_a():
    """dq = tau cot(alpha), dp = 0"""
    wv = closed_form(SchemeConfig(SchemeKind.A, alpha=0.002))
    shift = first_order_shifts(wv, GaussianPointer(w=1.0, tau=1e-6))
    assert shift.dq == pytest.approx(4.999993e-4, rel=1e-6)
    assert shift.dp == 0.0
    assert shift.weak_regime


def test_first_order_scheme_b():
    """dq = 0, dp = -2 tau W^2 cot(beta)"""
    wv = closed_form(SchemeConfig(SchemeKind.B, beta=0.002))
    shift = first_order_shifts(wv, GaussianPointer(w=1.0, tau=1e-6))
    assert shift.dq == pytest.approx(0.0, abs=1e-18)
    assert shift.dp == pytest.approx(-9.999987e-4, rel=1e-6)


def test_first_order_scheme_c():
    """Both pointer quadratures move for a plural weak value"""
    wv = closed_form(SchemeConfig(SchemeKind.C, alpha=0.002, beta=0.002))
    shift = first_order_shifts(wv, GaussianPointer(w=1.0, tau=1e-6))
    assert shift.dq == pytest.approx(2.500007e-4, rel=1e-6)
    assert shift.dp == pytest.approx(-4.999973e-4, rel=1e-6)
    assert shift.weakness == pytest.approx(1e-6 * wv.ab)


def test_first_order_warns_outside_weak_regime(caplog):
    """tau |A_w| above the threshold is flagged and logged"""
    wv = closed_form(SchemeConfig(SchemeKind.A, alpha=0.1))
    with caplog.at_level(logging.WARNING, logger="pluralwv.core.pointer"):
        shift = first_order_shifts(wv, GaussianPointer(tau=0.1))
    assert not shift.weak_regime
    assert shift.weakness > 0.1
    assert "first-order" in caplog.text


def test_first_order_zero_coupling():
    """tau = 0 leaves the pointer where it was"""
    wv = closed_form(SchemeConfig(SchemeKind.C, alpha=0.002, beta=0.002))
    shift = first_order_shifts(wv, GaussianPointer(tau=0.0))
    assert (shift.dq, shift.dp, shift.weakness) == (0.0, 0.0, 0.0)


def test_infer_weak_value_inverts_first_order():
    """dq / tau and dp / (2 tau W^2) give back A_w"""
    wv = closed_form(SchemeConfig(SchemeKind.C, alpha=0.002, beta=0.003))
    ptr = GaussianPointer(w=1.7, tau=1e-6)
    inferred = infer_weak_value(first_order_shifts(wv, ptr), ptr)
    assert abs(inferred - wv.aw) <= 1e-12 * wv.ab


def test_infer_weak_value_needs_coupling():
    """tau = 0 carries no weak value"""
    with pytest.raises(InvalidArgumentError):
        infer_weak_value(PointerShift(dq=0.0, dp=0.0, weakness=0.0), GaussianPointer(tau=0.0))


# ---------------------------------------------------------------
# EXACT EVOLUTION
# ---------------------------------------------------------------

def test_eigen_coefficients_reproduce_weak_value():
    """(c+ - c-) / (c+ + c-) = A_w and |c+ + c-|^2 = P"""
    cfg = SchemeConfig(SchemeKind.C, alpha=0.002, beta=0.003)
    c_plus, c_minus = eigen_coefficients(cfg)
    wv = closed_form(cfg)
    assert abs((c_plus - c_minus) / (c_plus + c_minus) - wv.aw) <= 1e-9 * wv.ab
    assert abs(c_plus + c_minus) ** 2 == pytest.approx(wv.prob, rel=1e-9)


def test_exact_single_eigenstate():
    """alpha = pi/4 post-selects |H> only: the pointer moves by exactly tau"""
    result = evolve_exact(SchemeConfig(SchemeKind.A, alpha=np.pi / 4), GaussianPointer(tau=0.01))
    assert result.shift.dq == pytest.approx(0.01, rel=1e-9)
    assert result.shift.dp == pytest.approx(0.0, abs=1e-12)
    assert result.probability == pytest.approx(0.5, rel=1e-9)


def test_exact_first_order_agreement():
    """Weak coupling: exact dq within 1% of tau cot(alpha)"""
    result = evolve_exact(SchemeConfig(SchemeKind.A, alpha=0.1), GaussianPointer(tau=1e-4))
    assert result.shift.dq == pytest.approx(1e-4 / np.tan(0.1), rel=1e-2)


@pytest.mark.parametrize(
    "cfg",
    [
        SchemeConfig(SchemeKind.A, alpha=0.002),
        SchemeConfig(SchemeKind.B, beta=0.002),
        SchemeConfig(SchemeKind.C, alpha=0.002, beta=0.002),
    ],
)
def test_exact_zero_coupling(cfg):
    """tau = 0: no shift and the bare post-selection probability"""
    result = evolve_exact(cfg, GaussianPointer(tau=0.0))
    assert result.shift.dq == pytest.approx(0.0, abs=1e-12)
    assert result.shift.dp == pytest.approx(0.0, abs=1e-12)
    assert result.probability == pytest.approx(closed_form(cfg).prob, rel=1e-9)


@pytest.mark.parametrize("alpha, tau", [(0.1, 0.05), (0.3, 0.2), (0.02, 0.01)])
def test_exact_scheme_a_closed_form(alpha, tau):
    """Quadrature reproduces the all-orders position shift of scheme a"""
    result = evolve_exact(SchemeConfig(SchemeKind.A, alpha=alpha), GaussianPointer(tau=tau))
    assert result.shift.dq == pytest.approx(_scheme_a_dq(alpha, tau), rel=1e-9)


@pytest.mark.parametrize("beta, tau, w", [(0.1, 0.05, 1.0), (0.3, 0.2, 1.0), (0.05, 0.01, 2.0)])
def test_exact_scheme_b_closed_form(beta, tau, w):
    """Quadrature reproduces the all-orders momentum shift and probability of scheme b"""
    result = evolve_exact(SchemeConfig(SchemeKind.B, beta=beta), GaussianPointer(w=w, tau=tau))
    assert result.shift.dp == pytest.approx(_scheme_b_dp(beta, tau, w), rel=1e-9)
    expected_prob = 0.5 - 0.5 * np.cos(2 * beta) * np.exp(-2 * tau ** 2 * w ** 2)
    assert result.probability == pytest.approx(expected_prob, rel=1e-9)


def test_exact_parity():
    """Mirroring the coupling mirrors both shifts"""
    c_plus, c_minus = eigen_coefficients(SchemeConfig(SchemeKind.C, alpha=0.1, beta=0.05))
    forward = exact_moments(c_plus, c_minus, w=1.0, tau=1e-3)
    mirror = exact_moments(c_plus, c_minus, w=1.0, tau=-1e-3)
    assert mirror.shift.dq == pytest.approx(-forward.shift.dq, abs=1e-12)
    assert mirror.shift.dp == pytest.approx(-forward.shift.dp, abs=1e-12)
    assert mirror.probability == pytest.approx(forward.probability, rel=1e-12)


def test_exact_grid_doubling():
    """Doubling the quadrature points leaves the moments unchanged"""
    cfg, ptr = SchemeConfig(SchemeKind.C, alpha=0.01, beta=0.02), GaussianPointer(tau=1e-3)
    coarse = evolve_exact(cfg, ptr, QuadratureSpec(points=2 ** 14))
    fine = evolve_exact(cfg, ptr, QuadratureSpec(points=2 ** 15))
    assert fine.probability == pytest.approx(coarse.probability, rel=1e-9)
    assert fine.shift.dq == pytest.approx(coarse.shift.dq, rel=1e-9)
    assert fine.shift.dp == pytest.approx(coarse.shift.dp, rel=1e-9)


@pytest.mark.parametrize("spec", [QuadratureSpec(width_sigmas=3.0), QuadratureSpec(points=16)])
def test_exact_unresolved_grid(spec):
    """A grid that loses Gaussian mass is a resolution error"""
    with pytest.raises(ResolutionError):
        evolve_exact(SchemeConfig(SchemeKind.A, alpha=0.1), GaussianPointer(tau=1e-3), spec)


def test_exact_annihilated_pointer():
    """c+ = c- = 0 leaves nothing to measure"""
    with pytest.raises(OrthogonalPostselectionError):
        exact_moments(0.0, 0.0, w=1.0, tau=1e-3)


# ---------------------------------------------------------------
# CONVERGENCE
# ---------------------------------------------------------------

def test_convergence_single_eigenstate():
    """First order is exact when only one eigenstate survives"""
    rows = convergence_study(SchemeConfig(SchemeKind.A, alpha=np.pi / 4), GaussianPointer(), [0.01, 0.001])
    for row in rows:
        assert abs(row.dq_residual) <= 1e-12
        assert abs(row.dp_residual) <= 1e-12


def test_convergence_scheme_a_contracts():
    """Halving tau shrinks the position residual at least threefold"""
    rows = convergence_study(SchemeConfig(SchemeKind.A, alpha=0.1), GaussianPointer(), [4e-3, 2e-3, 1e-3])
    residuals = [abs(row.dq_residual) for row in rows]
    assert residuals[1] <= residuals[0] / 3
    assert residuals[2] <= residuals[1] / 3
    assert all(row.weakness < 0.05 for row in rows)


def test_convergence_scheme_b_contracts():
    """Halving tau shrinks the momentum residual at least threefold"""
    rows = convergence_study(SchemeConfig(SchemeKind.B, beta=0.1), GaussianPointer(), [4e-3, 2e-3, 1e-3])
    residuals = [abs(row.dp_residual) for row in rows]
    assert residuals[1] <= residuals[0] / 3
    assert residuals[2] <= residuals[1] / 3


@pytest.mark.slow
@pytest.mark.parametrize(
    "cfg",
    [SchemeConfig(SchemeKind.A, alpha=0.1), SchemeConfig(SchemeKind.B, beta=0.1)],
)
def test_convergence_weak_regime_agreement(cfg):
    """Within 2% at tau |A_w| = 1e-3 and 1e-2, residual contracting on each halving"""
    ab = closed_form(cfg).ab
    for weakness in (1e-3, 1e-2):
        tau = weakness / ab
        first, halved = convergence_study(cfg, GaussianPointer(), [tau, tau / 2])
        assert first.agrees(rel_tol=0.02)
        assert halved.agrees(rel_tol=0.02)
        residual = abs(first.dq_residual) + abs(first.dp_residual)
        residual_halved = abs(halved.dq_residual) + abs(halved.dp_residual)
        assert residual_halved <= residual / 3


def test_convergence_flags_failures():
    """Non-strict studies flag a failed tau instead of raising"""
    cfg = SchemeConfig(SchemeKind.A, alpha=0.1)
    rows = convergence_study(cfg, GaussianPointer(), [1e-3], QuadratureSpec(points=16), strict=False)
    assert len(rows) == 1
    assert not rows[0].ok
    assert rows[0].error == "resolution"
    assert np.isnan(rows[0].dq_exact)
    assert not rows[0].agrees(rel_tol=1.0)

    with pytest.raises(ResolutionError):
        convergence_study(cfg, GaussianPointer(), [1e-3], QuadratureSpec(points=16))


def test_convergence_row_residuals():
    """Relative residuals against the exact shifts"""
    row = ConvergenceRow(tau=1e-3, dq_exact=1.01, dq_first=1.0, dp_exact=0.0, dp_first=0.0, weakness=1e-3)
    assert row.dq_residual == pytest.approx(0.01)
    assert row.agrees(rel_tol=0.02)
    assert not row.agrees(rel_tol=0.005)
