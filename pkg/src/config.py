"""Default numerical settings with environment overrides."""

import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

# Environment variable -> (field name, parser)
ENVIRONMENT_OVERRIDES = {
    'CHAMBER_BASIS_TOLERANCE': ('tolerance', float),
    'CHAMBER_BASIS_SEED': ('seed', int),
    'CHAMBER_BASIS_FLAG_ATTEMPTS': ('flag_attempts', int),
    'CHAMBER_BASIS_SAMPLES': ('samples', int),
    'CHAMBER_BASIS_STEP': ('step', float),
}


@dataclass(frozen=True)
class Defaults:
    """Numerical defaults shared by the library and the command line."""
    tolerance: float = 1e-9             # relative singular-value cutoff for ranks
    composition_tolerance: float = 1e-9  # allowed |D D| / (|D| |D|)
    seed: int = 0
    flag_attempts: int = 200
    brute_force_limit: int = 12         # largest n for the 2^n sign-vector sweep
    samples: int = 20                   # random weight vectors per property in verify
    step: float = 1e-6                  # finite-difference step for linearization


def load_defaults(environ: Optional[Mapping[str, str]] = None) -> Defaults:
    """
    Build Defaults, applying any CHAMBER_BASIS_* environment overrides.

    Args:
        environ: Mapping to read instead of os.environ

    Returns:
        Defaults with overridden fields replaced

    Raises:
        ValueError: if an override cannot be parsed or is out of range
    """
    if environ is None:
        environ = os.environ

    overrides = {}
    for variable, (field_name, parser) in ENVIRONMENT_OVERRIDES.items():
        raw = environ.get(variable)
        if raw is None or raw.strip() == '':
            continue
        try:
            value = parser(raw.strip())
        except ValueError as e:
            raise ValueError(f"{variable}={raw!r} is not a valid {parser.__name__}") from e
        if value < 0:
            raise ValueError(f"{variable} must be non-negative, got {raw!r}")
        overrides[field_name] = value

    return replace(Defaults(), **overrides)
