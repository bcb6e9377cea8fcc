# -*- coding: utf-8 -*-
"""
PluralWV Configuration
Tolerances and run defaults, optionally overridden from a YAML file
"""
import logging
from pathlib import Path
from typing import Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from pluralwv.errors import InvalidArgumentError

log = logging.getLogger(__name__)

# Below double precision the ratio <f|A|i>/<f|i> is meaningless
EPS_DIV = 1e-15
WEAKNESS_WARNING = 0.1
ORACLE_AGREEMENT = 0.01
ROOT_REL_TOL = 1e-12
PEAK_MATCH_REL = 1e-10
MASS_TOLERANCE = 1e-9
QUADRATURE_POINTS = 2 ** 14


class Tolerances(BaseModel):
    """Numerical thresholds used across the library"""
    model_config = ConfigDict(extra="forbid")

    eps_div: float = Field(default=EPS_DIV, gt=0)
    weakness_warning: float = Field(default=WEAKNESS_WARNING, gt=0)
    oracle_agreement: float = Field(default=ORACLE_AGREEMENT, gt=0)
    root_rel_tol: float = Field(default=ROOT_REL_TOL, gt=0)
    peak_match_rel: float = Field(default=PEAK_MATCH_REL, gt=0)
    mass_tolerance: float = Field(default=MASS_TOLERANCE, gt=0)


class Defaults(BaseModel):
    """Default run parameters: the 0.002 rad deflection scenario"""
    model_config = ConfigDict(extra="forbid")

    alpha: float = 0.002
    beta: float = 0.002
    w: float = Field(default=1.0, gt=0)
    tau: float = Field(default=1e-6, ge=0)
    quadrature_points: int = Field(default=QUADRATURE_POINTS, ge=16)
    grid_start: float = Field(default=1e-5, gt=0)
    grid_stop: float = Field(default=0.1, gt=0)
    grid_count: int = Field(default=400, ge=2)
    refine_count: int = Field(default=100, ge=0)


class Settings(BaseModel):
    """Top-level settings document"""
    model_config = ConfigDict(extra="forbid")

    tolerances: Tolerances = Field(default_factory=Tolerances)
    defaults: Defaults = Field(default_factory=Defaults)


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load settings from a YAML file

    Args:
        path: YAML document with optional `tolerances` / `defaults` sections.
            None returns the built-in settings.

    Returns:
        Validated Settings
    """
    if path is None:
        return Settings()

    path = Path(path)
    if not path.is_file():
        raise InvalidArgumentError(f"config file not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        raw = yaml.safe_load(f) or {}

    if not isinstance(raw, dict):
        raise InvalidArgumentError(f"config file {path} must contain a mapping")

    try:
        settings = Settings.model_validate(raw)
    except ValidationError as e:
        raise InvalidArgumentError(f"invalid config {path}: {e}")

    log.debug(f"Loaded settings from {path}")
    return settings
