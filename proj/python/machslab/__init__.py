"""Low Mach number MHD slab laboratory.

Configs go in as dicts and reports come back as dicts. The heavy lifting is
in the compiled ``_core`` extension.
"""

import json as _json

from . import _core
from ._core import (  # noqa: F401
    InvalidArgument,
    IoError,
    SolverError,
    enumerate_count,
    fit_rate,
    grid_points,
    lattice_count,
    sobolev_norm,
    thread_limit,
)

__all__ = [
    "run",
    "sweep",
    "picard",
    "identities",
    "energy",
    "fit_rate",
    "lattice_count",
    "enumerate_count",
    "grid_points",
    "sobolev_norm",
    "thread_limit",
    "InvalidArgument",
    "SolverError",
    "IoError",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def run(config, out_dir=""):
    """Single run; returns dt, monitor rows and the monitor checks."""
    return _json.loads(_core.run_json(_text(config), out_dir))


def sweep(config, out_dir=""):
    """Mach sweep; writes the report files when out_dir is given."""
    return _json.loads(_core.sweep_json(_text(config), out_dir))


def picard(config, t_final=0.125, n_max=16):
    return _json.loads(_core.picard_json(_text(config), t_final, n_max))


def identities(dim=2, seed=0, seeds=10, epsilon=0.1):
    return _json.loads(_core.identities_json(dim, seed, seeds, epsilon))


def energy(config):
    """Energy report of the band-limited initial state of a run config."""
    return _json.loads(_core.energy_json(_text(config)))
