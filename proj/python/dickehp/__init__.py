"""Heisenberg product and entanglement entropy for Dicke-type models."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__, sweep_csv as _sweep_csv


def sweep(config):
    """Run a sweep from a dict (or JSON string); returns (text, exit_code)."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _sweep_csv(config)
