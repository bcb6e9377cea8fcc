# -*- coding: utf-8 -*-
"""
PluralWV - weak-value simulation and estimation toolkit
"""
from pluralwv.core.states import PAULI_HV, Observable, PolarizationState, apply, inner, linear_state, phase_state
from pluralwv.core.weak_value import (
    SchemeConfig,
    SchemeKind,
    WeakValueResult,
    closed_form,
    post_state,
    postselection_probability,
    pre_state,
    weak_value,
)

__version__ = "0.1.0"
