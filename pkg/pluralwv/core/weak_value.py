# -*- coding: utf-8 -*-
"""
PluralWV Weak Values
Scheme constructors, weak values and post-selection probabilities
"""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pluralwv.config import EPS_DIV
from pluralwv.core.states import (
    PAULI_HV,
    Observable,
    PolarizationState,
    apply,
    inner,
    linear_state,
    phase_state,
)
from pluralwv.errors import InvalidArgumentError, OrthogonalPostselectionError, require_finite

log = logging.getLogger(__name__)

HALF_PI = np.pi / 2


class SchemeKind(Enum):
    """Pre-/post-selection schemes"""
    A = "a"  # real weak value, deflected P1, linear post-selection
    B = "b"  # imaginary weak value, QWP + P2 post-selection
    C = "c"  # plural weak value, deflected P1 with QWP + P2


@dataclass(frozen=True)
class SchemeConfig:
    """
    Scheme identity plus its angles (radians)

    alpha is the P1 deflection (zero for kind B), beta the P2/QWP angle
    (zero for kind A). Both live in (-pi/2, pi/2).
    """
    kind: SchemeKind
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        kind = SchemeKind(self.kind)
        alpha = require_finite("alpha", self.alpha)
        beta = require_finite("beta", self.beta)

        for name, angle in (("alpha", alpha), ("beta", beta)):
            if not -HALF_PI < angle < HALF_PI:
                raise InvalidArgumentError(f"{name}={angle} outside (-pi/2, pi/2)")
        if kind is SchemeKind.A and beta != 0.0:
            raise InvalidArgumentError("scheme a has no P2/QWP angle: beta must be 0")
        if kind is SchemeKind.B and alpha != 0.0:
            raise InvalidArgumentError("scheme b has no P1 deflection: alpha must be 0")

        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def build(cls, kind: SchemeKind, alpha: float = 0.0, beta: float = 0.0) -> "SchemeConfig":
        """Construct a config, zeroing the angle the scheme does not use"""
        kind = SchemeKind(kind)
        if kind is SchemeKind.A:
            beta = 0.0
        elif kind is SchemeKind.B:
            alpha = 0.0
        return cls(kind, alpha, beta)


@dataclass(frozen=True)
class WeakValueResult:
    """Complex weak value A_w and post-selection probability P"""
    aw: complex
    prob: float

    @property
    def re(self) -> float:
        return self.aw.real

    @property
    def im(self) -> float:
        return self.aw.imag

    @property
    def ab(self) -> float:
        """Modulus |A_w|"""
        return abs(self.aw)


def pre_state(cfg: SchemeConfig) -> PolarizationState:
    """P1 output: sin(pi/4 + alpha)|H> + cos(pi/4 + alpha)|V>"""
    if cfg.kind is SchemeKind.B:
        return linear_state(np.pi / 4)
    return linear_state(np.pi / 4 + cfg.alpha)


def post_state(cfg: SchemeConfig) -> PolarizationState:
    """P2 (scheme a) or QWP + P2 (schemes b, c) post-selection"""
    if cfg.kind is SchemeKind.A:
        return linear_state(-np.pi / 4)
    return phase_state(cfg.beta)


def postselection_probability(pre: PolarizationState, post: PolarizationState) -> float:
    """P = |<post|pre>|^2"""
    return min(abs(inner(post, pre)) ** 2, 1.0)


def weak_value(
    pre: PolarizationState,
    post: PolarizationState,
    obs: Observable = PAULI_HV,
    eps_div: float = EPS_DIV,
) -> WeakValueResult:
    """
    General weak value <post|A|pre> / <post|pre>

    Raises:
        OrthogonalPostselectionError: |<post|pre>| below eps_div
    """
    overlap = inner(post, pre)
    if abs(overlap) < eps_div:
        raise OrthogonalPostselectionError(
            f"|<post|pre>| = {abs(overlap):.3e} below {eps_div:.0e}: weak value diverges"
        )

    numerator = complex(np.vdot(post.vector, apply(obs, pre)))
    return WeakValueResult(aw=numerator / overlap, prob=min(abs(overlap) ** 2, 1.0))


def closed_form(cfg: SchemeConfig, eps_div: float = EPS_DIV) -> WeakValueResult:
    """
    Analytic weak value and probability per scheme

    Scheme c uses (cos a cos b + i sin a sin b) / (sin a cos b + i cos a sin b),
    the conjugate of the textbook expression that writes exp(-i b) on the
    (sin a + cos a) term. This convention is the one that reduces to
    scheme a as beta -> 0 and to scheme b as alpha -> 0.

    Raises:
        OrthogonalPostselectionError: divergent angle for the scheme
    """
    a, b = cfg.alpha, cfg.beta

    if cfg.kind is SchemeKind.A:
        overlap = complex(np.sin(a))
        numerator = complex(np.cos(a))
    elif cfg.kind is SchemeKind.B:
        overlap = 1j * np.sin(b)
        numerator = complex(np.cos(b))
    else:
        overlap = np.sin(a) * np.cos(b) + 1j * np.cos(a) * np.sin(b)
        numerator = np.cos(a) * np.cos(b) + 1j * np.sin(a) * np.sin(b)

    if abs(overlap) < eps_div:
        raise OrthogonalPostselectionError(
            f"scheme {cfg.kind.value} diverges at alpha={a}, beta={b}"
        )

    if cfg.kind is SchemeKind.C:
        # Avoids the 1 - cos2a cos2b cancellation at small angles
        prob = (np.sin(a) * np.cos(b)) ** 2 + (np.cos(a) * np.sin(b)) ** 2
    else:
        prob = abs(overlap) ** 2

    return WeakValueResult(aw=complex(numerator / overlap), prob=float(prob))
