"""Interaction-kernel backend selection.

The compiled kernel is preferred when its extension module imported
cleanly; otherwise the NumPy implementation is used.  Setting the
environment variable ``WAVEFARM_PURE_PYTHON=1`` forces the fallback,
which is how the benchmark and the cross-checking tests obtain both.
"""

from __future__ import annotations

import os

from . import _interaction_py


def _select():
    if os.environ.get("WAVEFARM_PURE_PYTHON"):
        return _interaction_py
    try:
        from . import _interaction_cy  # type: ignore[attr-defined]
        return _interaction_cy
    except ImportError:
        return _interaction_py


_active = _select()

unit_power_grid = _active.unit_power_grid


def active_backend() -> str:
    """Name of the kernel in use: ``cython`` or ``python``."""
    return _active.BACKEND_NAME


def available_backends() -> dict:
    """All importable kernels keyed by name (for benchmarks and tests)."""
    found = {_interaction_py.BACKEND_NAME: _interaction_py}
    try:
        from . import _interaction_cy  # type: ignore[attr-defined]
        found[_interaction_cy.BACKEND_NAME] = _interaction_cy
    except ImportError:
        pass
    return found
