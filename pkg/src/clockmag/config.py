"""
Run configuration for the command-line front end.

A configuration is a YAML mapping with the blocks listed in :data:`SCHEMA`.
Every leaf carries a default and a unit.  Units follow the internal
convention ``hbar = mu = 1``: fields and frequencies are angular
frequencies (``rad/s`` of the chosen time unit), times are in that time
unit, angles in radians.  Unknown keys are rejected.
"""

from __future__ import annotations

import copy
from pathlib import Path

import numpy as np
import yaml

__all__ = ["SCHEMA", "ConfigError", "defaults", "load_config", "merge_config", "units_table"]

PI = float(np.pi)

# block -> key -> (default, unit)
SCHEMA = {
    "seed": (0, "dimensionless"),
    "integrator": {
        "steps_per_period": (200, "dimensionless"),
        "step_count": (64, "dimensionless"),
    },
    "output": {
        "formats": (["csv", "json"], "dimensionless"),
    },
    "two-spin": {
        "chi": ([0.0, PI / 6, PI / 3], "rad"),
        "phi_points": (61, "dimensionless"),
        "simulate": (True, "dimensionless"),
    },
    "rabi-scan": {
        "Omega_ratio": (0.27, "dimensionless"),
        "phi": ([0.0, PI / 2], "rad"),
        "area_max": (8 * PI / 0.27, "rad"),
        "points": (2001, "dimensionless"),
    },
    "dc-ramsey": {
        "Omega_ratio": (0.27, "dimensionless"),
        "phi": ([-0.6, -0.3, 0.0, 0.3, 0.6], "rad"),
        "theta_points": (64, "dimensionless"),
        "simulate": (False, "dimensionless"),
        "fringe_Omega_ratios": ([0.01, 0.27, 1.0, 3.0], "dimensionless"),
        "fringe_phi_points": (201, "dimensionless"),
    },
    "ac-filter": {
        "phi0": (0.005, "rad"),
        "n": (20, "dimensionless"),
        "Omega_ratio": (3.0, "dimensionless"),
        "omega_m": (1.0, "rad/s"),
        "Omega1": (None, "rad/s"),
        "ratio_min": (0.5, "dimensionless"),
        "ratio_max": (1.5, "dimensionless"),
        "points": (101, "dimensionless"),
        "simulate": (True, "dimensionless"),
    },
    "diabatic": {
        "B_i": (500.0, "rad/s"),
        "B_f": (5.0, "rad/s"),
        "delta": (1.0, "rad/s"),
        "T_min": (0.01, "s"),
        "T_max": (10.0, "s"),
        "T_points": (25, "dimensionless"),
        "ratio_i": ([10.0, 200.0], "dimensionless"),
        "ratio_f": ([2.0, 50.0], "dimensionless"),
        "plane_points": (10, "dimensionless"),
        "T_plane": (1.0, "s"),
    },
    "sensitivity": {
        "B_range": ([1.0, 100.0], "dimensionless"),
        "Omega_range": ([0.5, 100.0], "dimensionless"),
        "points": (40, "dimensionless"),
        "N": (1, "dimensionless"),
        "T_max": (0.9, "dimensionless"),
        "tol": (1e-6, "dimensionless"),
        "mask_threshold": (0.5, "dimensionless"),
        "B_report": (50.0, "dimensionless"),
        # bookkeeping for N = n V T_total / tau_clk
        "density": (None, "1/volume"),
        "volume": (None, "volume"),
        "T_total": (None, "s"),
        "tau_clk": (1.0, "s"),
    },
    "sweep": {
        "operation": (None, "dimensionless"),
        "axes": ({}, "per axis"),
        "fixed": ({}, "per parameter"),
    },
}


class ConfigError(ValueError):
    """Unreadable or invalid configuration."""


def defaults() -> dict:
    """Configuration populated with every default."""

    def strip(node):
        if isinstance(node, dict):
            return {k: strip(v) for k, v in node.items()}
        return copy.deepcopy(node[0])

    return strip(SCHEMA)


def units_table() -> dict:
    """``{"block.key": unit}`` for every leaf."""
    out = {}
    for k, v in SCHEMA.items():
        if isinstance(v, dict):
            out.update({f"{k}.{kk}": vv[1] for kk, vv in v.items()})
        else:
            out[k] = v[1]
    return out


def merge_config(user: dict) -> dict:
    """Overlay ``user`` on the defaults, rejecting unknown keys."""
    if user is None:
        user = {}
    if not isinstance(user, dict):
        raise ConfigError("configuration must be a mapping")
    cfg = defaults()
    for k, v in user.items():
        if k not in SCHEMA:
            raise ConfigError(f"unknown key {k!r}")
        if isinstance(SCHEMA[k], dict):
            if not isinstance(v, dict):
                raise ConfigError(f"block {k!r} must be a mapping")
            for kk, vv in v.items():
                if kk not in SCHEMA[k]:
                    raise ConfigError(f"unknown key {k}.{kk}")
                cfg[k][kk] = vv
        else:
            cfg[k] = v
    if not isinstance(cfg["seed"], int) or isinstance(cfg["seed"], bool):
        raise ConfigError("seed must be an integer")
    return cfg


def load_config(path=None) -> dict:
    """Read a YAML configuration; ``None`` gives the defaults."""
    if path is None:
        return merge_config({})
    try:
        text = Path(path).read_text(encoding="utf-8")
        user = yaml.safe_load(text)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return merge_config(user)
