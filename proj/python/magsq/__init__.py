"""Python bindings for the magsq simulator."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import _run_scenario, _sweep, _validate_config


def run_scenario(name, overrides=None):
    """Run fig2, fig3, fig5 or fig6; `overrides` is a configuration dict."""
    return _run_scenario(name, _json.dumps(overrides or {}))


def sweep(config, path, grid, metric="steady"):
    return _sweep(_json.dumps(config or {}), path, list(grid), metric)


def validate_config(config):
    """Return the model kind, or raise SchemaError / a physics error."""
    return _validate_config(_json.dumps(config or {}))
