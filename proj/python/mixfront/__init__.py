"""Two-species competition with mixed dispersal and free boundaries."""

import json as _json

from ._core import ConfigError, Kernel, lambda1_mixed, lambda1_nonlocal
from . import _core

__all__ = [
    "ConfigError",
    "Kernel",
    "lambda1_mixed",
    "lambda1_nonlocal",
    "normalize_config",
    "predict",
    "run_command",
    "simulate",
    "thresholds",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def normalize_config(config):
    """Parse a config dict and return it with every default filled in."""
    return _json.loads(_core.normalize_config(_text(config)))


def thresholds(config):
    return _json.loads(_core.thresholds(_text(config)))


def predict(config):
    return _json.loads(_core.predict(_text(config)))


def simulate(config):
    """Run to the horizon or an early verdict; returns outcome plus the series."""
    return _json.loads(_core.simulate(_text(config)))


def run_command(name, config_path, out=None, horizon=None, seed=None, jobs=1, confirm=False):
    """Same as the CLI subcommand. Returns (exit_code, log, errors)."""
    return _core.run_command(name, str(config_path), out if out is None else str(out),
                             horizon, seed, jobs, confirm)
