"""Desk-scale resource caps, overridable through the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InstanceError

ENV_MAX_DEGREE = "COE_HOMOLOGY_MAX_DEGREE"
ENV_SIZE_CAP = "COE_HOMOLOGY_SIZE_CAP"
ENV_LP_DIM_CAP = "COE_HOMOLOGY_LP_DIM_CAP"


@dataclass(frozen=True)
class Caps:
    max_degree: int = 3
    size: int = 5000
    lp_dim: int = 24


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        v = int(raw)
    except ValueError:
        raise InstanceError("%s must be an integer, got %r" % (name, raw)) from None
    if v < 0:
        raise InstanceError("%s must be non-negative" % name)
    return v


def caps() -> Caps:
    """Current caps; environment variables override the defaults."""
    d = Caps()
    return Caps(_env_int(ENV_MAX_DEGREE, d.max_degree),
                _env_int(ENV_SIZE_CAP, d.size),
                _env_int(ENV_LP_DIM_CAP, d.lp_dim))
