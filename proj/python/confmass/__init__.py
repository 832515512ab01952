"""Python access to the confmass C++ core.

Functions returning reports, certificates or configs hand back parsed
dictionaries; everything else is the compiled object.
"""

import json as _json

from . import _core
from ._core import (
    ConfmassError,
    build_domain,
    build_grid,
    compute_map,
    conformal_factor,
    continuation_branch,
    field_on_disk,
    integrate,
    mass,
    PotentialField,
    radial_oracle,
    solve_henon,
    solve_liouville,
    solve_system,
    transform_potential,
)

__all__ = [
    "ConfmassError",
    "build_domain",
    "build_grid",
    "builtin_config",
    "compute_map",
    "conformal_factor",
    "continuation_branch",
    "field_on_disk",
    "general_certificate",
    "henon_certificate",
    "integrate",
    "liouville_certificate",
    "mass",
    "pohozaev_report",
    "PotentialField",
    "radial_oracle",
    "run_experiment",
    "solve_henon",
    "solve_liouville",
    "solve_system",
    "system_certificate",
    "system_pohozaev_report",
    "transform_potential",
]


def pohozaev_report(solution):
    return _json.loads(_core.pohozaev_report(solution))


def system_pohozaev_report(solutions, a):
    return _json.loads(_core.system_pohozaev_report(solutions, a))


def liouville_certificate(alpha, k):
    return _json.loads(_core.liouville_certificate(alpha, k))


def henon_certificate(alpha, k, c0, p0):
    return _json.loads(_core.henon_certificate(alpha, k, c0, p0))


def system_certificate(a, alphas, ks):
    return _json.loads(_core.system_certificate(a, alphas, ks))


def general_certificate(c_w, c_f, weight_integral):
    return _json.loads(_core.general_certificate(c_w, c_f, weight_integral))


def builtin_config(name):
    return _json.loads(_core.builtin_config(name))


def run_experiment(config, write_files=False):
    """Run a config (dict, or builtin name such as "E1") and return the report dict."""
    if isinstance(config, str):
        config = builtin_config(config)
    return _json.loads(_core.run_experiment(_json.dumps(config), write_files))
