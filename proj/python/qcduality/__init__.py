"""Quantum-classical duality checks for boundary Gaudin magnets and BCD Calogero-Moser systems."""

import json

from ._core import QcdError, identity_holds, main, nilpotency, version

__all__ = ["QcdError", "identity_holds", "main", "nilpotency", "run", "version"]
__version__ = version()


def run(command, config=None):
    """Run a subcommand (``duality``, ``identity``, ...) and return the report as a dict."""
    from . import _core

    return json.loads(_core.run(command, json.dumps(config or {})))
