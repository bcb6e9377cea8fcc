# -*- coding: utf-8 -*-
"""
PluralWV Core States
Two-level polarization state algebra over the {H, V} basis
"""
import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from pluralwv.errors import InvalidArgumentError, require_finite

log = logging.getLogger(__name__)

# Zero vectors cannot be normalized
NORM_FLOOR = 1e-15
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class PolarizationState:
    """
    Normalized pure state amp_h|H> + amp_v|V>

    Construction normalizes the amplitudes. The global phase is kept as
    given; compare states with `same_ray`, not `==`.
    """
    amp_h: complex
    amp_v: complex

    def __post_init__(self):
        h = complex(self.amp_h)
        v = complex(self.amp_v)
        for name, z in (("amp_h", h), ("amp_v", v)):
            if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                raise InvalidArgumentError(f"{name} must be finite, got {z}")

        norm = float(np.hypot(abs(h), abs(v)))
        if norm < NORM_FLOOR:
            raise InvalidArgumentError(f"cannot normalize zero vector (norm={norm:.3e})")

        object.__setattr__(self, "amp_h", h / norm)
        object.__setattr__(self, "amp_v", v / norm)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp_h, self.amp_v], dtype=complex)

    def same_ray(self, other: "PolarizationState", tol: float = 1e-12) -> bool:
        """True when both states differ only by a global phase"""
        return abs(abs(inner(self, other)) - 1.0) <= tol


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator on the polarization space"""
    m: np.ndarray = field(repr=False)
    name: str = "observable"

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidArgumentError(f"observable must be 2x2, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise InvalidArgumentError(f"observable '{self.name}' is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)


# A = |H><H| - |V><V|
PAULI_HV = Observable(np.diag([1.0, -1.0]), name="pauli_hv")

H = PolarizationState(1.0, 0.0)
V = PolarizationState(0.0, 1.0)


def linear_state(theta: float) -> PolarizationState:
    """sin(theta)|H> + cos(theta)|V>"""
    theta = require_finite("theta", theta)
    return PolarizationState(np.sin(theta), np.cos(theta))


def phase_state(beta: float) -> PolarizationState:
    """(exp(-i beta)|H> - exp(i beta)|V>) / sqrt(2), the QWP + P2 post-selection"""
    beta = require_finite("beta", beta)
    return PolarizationState(np.exp(-1j * beta) / np.sqrt(2), -np.exp(1j * beta) / np.sqrt(2))


def inner(bra: PolarizationState, ket: PolarizationState) -> complex:
    """<bra|ket>; the bra components are conjugated"""
    return complex(np.vdot(bra.vector, ket.vector))


def apply(obs: Observable, s: Union[PolarizationState, np.ndarray]) -> np.ndarray:
    """Matrix action obs|s>, returned as an unnormalized 2-vector"""
    vec = s.vector if isinstance(s, PolarizationState) else np.asarray(s, dtype=complex)
    return obs.m @ vec
