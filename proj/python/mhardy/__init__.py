"""Python front end for the mhardy verifiers.

Configs are plain dicts with the same layout as the CLI's JSON files.
"""

import json

from ._mhardy import (
    AdmissibilityError,
    ConfigError,
    DomainError,
    Error,
    __version__,
    grad_rho,
    hom_dim,
    list_theorems,
    rho,
    theorem_ids,
)
from . import _mhardy


def verify(config, admissibility=None):
    """Run a suite; returns (report dict, ok)."""
    text, ok = _mhardy.verify_json(json.dumps(config), admissibility)
    return json.loads(text), ok


def sweep(config, admissibility=None):
    """Sharpness sweep; returns (combined dict, {file name: csv text}, ok)."""
    text, tables, ok = _mhardy.sweep_json(json.dumps(config), admissibility)
    return json.loads(text), dict(tables), ok


__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "DomainError",
    "Error",
    "__version__",
    "grad_rho",
    "hom_dim",
    "list_theorems",
    "rho",
    "sweep",
    "theorem_ids",
    "verify",
]
